//! Empirical check of the entropy growth bound under Gaussian smoothing,
//! `S(X + √σ Z) ≤ S(X) + ½ ln(σ J(X) + 1)`, which holds with equality when
//! `X` is Gaussian.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::substream;
use crate::error::{Error, Result};
use crate::estimators::spacing_entropy;
use crate::preprocess::{mean_var, min_max};

/// Minimum sample size accepted by [`verify_noise_bound`].
pub const MIN_BOUND_SAMPLE: usize = 1000;

/// Test inputs for [`verify_noise_bound`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundInput {
    /// `N(0, 1)`; the bound is attained.
    Gaussian,
    /// `U(0, 1)`; infinite Fisher information.
    Uniform,
    /// Equal mixture of `N(−1, 0.1²)` and `N(1, 0.1²)`.
    Bimodal,
}

impl BoundInput {
    pub const ALL: [BoundInput; 3] = [Self::Gaussian, Self::Uniform, Self::Bimodal];

    pub fn name(self) -> &'static str {
        match self {
            Self::Gaussian => "gaussian",
            Self::Uniform => "uniform",
            Self::Bimodal => "bimodal",
        }
    }

    /// `m` draws from a stream disjoint from those used for the noise.
    pub fn sample(self, m: usize, seed: u64) -> Vec<f64> {
        let mut rng = substream(seed, INPUT_STREAM);
        (0..m)
            .map(|_| match self {
                Self::Gaussian => rng.sample(StandardNormal),
                Self::Uniform => rng.random::<f64>(),
                Self::Bimodal => {
                    let mu = if rng.random::<bool>() { 1.0 } else { -1.0 };
                    mu + 0.1 * rng.sample::<f64, _>(StandardNormal)
                }
            })
            .collect()
    }
}

impl std::str::FromStr for BoundInput {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown input '{s}'")))
    }
}

const INPUT_STREAM: u64 = u64::MAX;

/// Fisher information estimate of a univariate sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherEstimate {
    /// Deconvolved estimate (see [`estimate_fisher_information`]).
    pub value: f64,
    /// `∫ p̂'² / p̂` of the kernel density estimate itself.
    pub smoothed: f64,
    pub bandwidth: f64,
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

const MAX_GRID: usize = 1 << 16;

/// Estimates `J(X) = ∫ p'(x)² / p(x) dx`.
///
/// A Gaussian kernel density estimate at Silverman's reference bandwidth
/// `h = 0.9 min(sd, IQR/1.34) m^{-1/5}` is computed on a linearly binned
/// grid, and `J_h = ∫ p̂'² / p̂` is integrated on that grid. The estimate is
/// the density of `X + hZ`, whose Fisher information satisfies
/// `1/J_h ≥ 1/J(X) + h²` with equality for Gaussian `X`; the returned value
/// is `1 / (1/J_h − h²)`, or infinity when the difference is not positive.
pub fn estimate_fisher_information(x: &[f64]) -> Result<FisherEstimate> {
    if x.len() < 3 {
        return Err(Error::TooFewObservations {
            got: x.len(),
            need: 3,
        });
    }
    crate::types::check_finite(x)?;
    let mut sorted = x.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let (_, var) = mean_var(x);
    let sd = var.sqrt();
    let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
    let scale = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    if !(scale > 0.0) {
        return Err(Error::ConstantInput);
    }
    let m = x.len() as f64;
    let h = 0.9 * scale * m.powf(-0.2);

    let (lo, hi) = min_max(x);
    let (lo, hi) = (lo - 6.0 * h, hi + 6.0 * h);
    let mut step = h / 10.0;
    if ((hi - lo) / step) as usize + 2 > MAX_GRID {
        step = (hi - lo) / (MAX_GRID - 2) as f64;
    }
    let n = ((hi - lo) / step).ceil() as usize + 2;
    let mut weights = vec![0.0; n];
    for &v in x {
        let pos = (v - lo) / step;
        let i = pos.floor() as usize;
        let frac = pos - i as f64;
        weights[i] += 1.0 - frac;
        weights[i + 1] += frac;
    }

    let reach = (5.0 * h / step).ceil() as usize;
    let norm = 1.0 / (m * h * (2.0 * std::f64::consts::PI).sqrt());
    let kernel: Vec<(f64, f64)> = (0..=2 * reach)
        .map(|k| {
            let u = (k as f64 - reach as f64) * step / h;
            let phi = (-0.5 * u * u).exp() * norm;
            (phi, -u / h * phi)
        })
        .collect();
    let mut density = vec![0.0; n];
    let mut slope = vec![0.0; n];
    for (j, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let start = j.saturating_sub(reach);
        let end = (j + reach).min(n - 1);
        for t in start..=end {
            let (phi, dphi) = kernel[t + reach - j];
            density[t] += w * phi;
            slope[t] += w * dphi;
        }
    }
    let peak = density.iter().cloned().fold(0.0, f64::max);
    let smoothed: f64 = density
        .iter()
        .zip(&slope)
        .filter(|(p, _)| **p > 1e-12 * peak)
        .map(|(p, d)| d * d / p)
        .sum::<f64>()
        * step;
    let excess = 1.0 / smoothed - h * h;
    let value = if excess > 0.0 {
        1.0 / excess
    } else {
        f64::INFINITY
    };
    Ok(FisherEstimate {
        value,
        smoothed,
        bandwidth: h,
    })
}

/// One noise level of [`verify_noise_bound`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseBoundLevel {
    pub sigma: f64,
    /// `Ŝ(x + √σ z)`
    pub entropy_noisy: f64,
    /// `Ŝ(x)`
    pub entropy_clean: f64,
    pub fisher: f64,
    /// `1/Var(x)`: the Fisher information of the moment-matched Gaussian and a
    /// lower bound on `J(X)`.
    pub fisher_gaussian: f64,
    /// `Ŝ(x) + ½ ln(σ Ĵ + 1)`
    pub bound: f64,
    /// `bound − entropy_noisy`; negative values violate the bound.
    pub gap: f64,
}

impl NoiseBoundLevel {
    pub fn holds(&self, tol: f64) -> bool {
        self.gap >= -tol
    }

    pub fn tight(&self, tol: f64) -> bool {
        self.gap.abs() <= tol
    }
}

/// Adds `√σ Z` for each `σ` and compares the estimated entropy against the bound.
pub fn verify_noise_bound(
    x: &[f64],
    sigma_levels: &[f64],
    seed: u64,
) -> Result<Vec<NoiseBoundLevel>> {
    if x.len() < MIN_BOUND_SAMPLE {
        return Err(Error::TooFewObservations {
            got: x.len(),
            need: MIN_BOUND_SAMPLE,
        });
    }
    if let Some(&s) = sigma_levels
        .iter()
        .find(|s| !(**s >= 0.0) || !s.is_finite())
    {
        return Err(Error::InvalidParameter(format!(
            "noise variance must be >= 0, got {s}"
        )));
    }
    let entropy_clean = spacing_entropy(x)?;
    let fisher = estimate_fisher_information(x)?.value;
    let (_, var) = mean_var(x);
    sigma_levels
        .iter()
        .enumerate()
        .map(|(i, &sigma)| {
            let mut rng = substream(seed, i as u64);
            let amp = sigma.sqrt();
            let noisy: Vec<f64> = x
                .iter()
                .map(|&v| v + amp * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let entropy_noisy = spacing_entropy(&noisy)?;
            let bound = entropy_clean + 0.5 * (sigma * fisher).ln_1p();
            Ok(NoiseBoundLevel {
                sigma,
                entropy_noisy,
                entropy_clean,
                fisher,
                fisher_gaussian: 1.0 / var,
                bound,
                gap: bound - entropy_noisy,
            })
        })
        .collect()
}

/// Largest noise variance for which `Ŝ(Y + √σ E) < Ŝ(X)` is guaranteed when
/// `Ŝ(Y) < Ŝ(X)`: `(e^{2(S_X − S_Y)} − 1) / J(Y)`.
pub fn noise_tolerance_threshold(
    entropy_cause: f64,
    entropy_effect: f64,
    fisher_effect: f64,
) -> f64 {
    (2.0 * (entropy_cause - entropy_effect)).exp_m1() / fisher_effect
}
