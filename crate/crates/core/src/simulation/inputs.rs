use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Width parameter of the benchmark input densities.
pub const DEFAULT_WIDTH: f64 = 0.2;

const MAX_CONSECUTIVE_REJECTIONS: u64 = 1_000_000;

/// Shape of the cause distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InputKind {
    /// (A) uniform on `[0, 1]`.
    Uniform,
    /// (B) `N(0, σ²)`.
    GaussAtZero,
    /// (C) `N(0.5, σ²)`.
    GaussCentered,
    /// (D) `N(1, σ²)`.
    GaussAtOne,
    /// (E) equal mixture of `N(0.3, (σ/2)²)` and `N(0.7, (σ/2)²)`.
    GaussMixture,
}

impl InputKind {
    pub const ALL: [InputKind; 5] = [
        Self::Uniform,
        Self::GaussAtZero,
        Self::GaussCentered,
        Self::GaussAtOne,
        Self::GaussMixture,
    ];

    pub fn letter(self) -> char {
        match self {
            Self::Uniform => 'A',
            Self::GaussAtZero => 'B',
            Self::GaussCentered => 'C',
            Self::GaussAtOne => 'D',
            Self::GaussMixture => 'E',
        }
    }
}

/// An input distribution with its width parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InputDist {
    pub kind: InputKind,
    pub sigma: f64,
}

impl InputDist {
    pub fn new(kind: InputKind, sigma: f64) -> Self {
        Self { kind, sigma }
    }

    pub fn standard(kind: InputKind) -> Self {
        Self::new(kind, DEFAULT_WIDTH)
    }
}

impl fmt::Display for InputDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.sigma;
        match self.kind {
            InputKind::Uniform => write!(f, "U(0,1)"),
            InputKind::GaussAtZero => write!(f, "N(0,{s}^2)"),
            InputKind::GaussCentered => write!(f, "N(0.5,{s}^2)"),
            InputKind::GaussAtOne => write!(f, "N(1,{s}^2)"),
            InputKind::GaussMixture => write!(f, "GM([0.3,0.7],[{0},{0}])", s / 2.0),
        }
    }
}

fn draw<R: Rng + ?Sized>(dist: &InputDist, rng: &mut R) -> f64 {
    let mean = match dist.kind {
        InputKind::Uniform => return rng.random::<f64>(),
        InputKind::GaussAtZero => 0.0,
        InputKind::GaussCentered => 0.5,
        InputKind::GaussAtOne => 1.0,
        InputKind::GaussMixture => {
            let mean = if rng.random::<bool>() { 0.3 } else { 0.7 };
            let z: f64 = rng.sample(StandardNormal);
            return mean + 0.5 * dist.sigma * z;
        }
    };
    let z: f64 = rng.sample(StandardNormal);
    mean + dist.sigma * z
}

/// Draws `m` values. With `truncate`, draws outside `[0, 1]` are rejected,
/// so the result follows the distribution conditioned on `[0, 1]`.
pub fn sample_input_with<R: Rng + ?Sized>(
    dist: &InputDist,
    m: usize,
    truncate: bool,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if !(dist.sigma > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "width must be positive, got {}",
            dist.sigma
        )));
    }
    let mut out = Vec::with_capacity(m);
    let mut rejected = 0u64;
    while out.len() < m {
        let v = draw(dist, rng);
        if truncate && !(0.0..=1.0).contains(&v) {
            rejected += 1;
            if rejected >= MAX_CONSECUTIVE_REJECTIONS {
                return Err(Error::SamplingStalled(rejected));
            }
            continue;
        }
        rejected = 0;
        out.push(v);
    }
    Ok(out)
}

/// `m` draws from `dist` truncated to `[0, 1]`, from the seed's stream 0.
pub fn sample_input(dist: &InputDist, m: usize, seed: u64) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "sample size must be at least 1".into(),
        ));
    }
    sample_input_with(dist, m, true, &mut super::substream(seed, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preprocess::mean_var;

    #[test]
    fn uniform_mean_band() {
        let x = sample_input(&InputDist::standard(InputKind::Uniform), 1000, 1).unwrap();
        let (m, _) = mean_var(&x);
        assert!((0.45..=0.55).contains(&m), "{m}");
    }

    #[test]
    fn truncated_samples_stay_in_unit_interval() {
        for kind in InputKind::ALL {
            let x = sample_input(&InputDist::standard(kind), 5000, 9).unwrap();
            assert!(x.iter().all(|v| (0.0..=1.0).contains(v)), "{kind:?}");
        }
    }

    #[test]
    fn centered_gaussian_keeps_its_mean() {
        let x = sample_input(&InputDist::standard(InputKind::GaussCentered), 10_000, 2).unwrap();
        let (m, _) = mean_var(&x);
        assert!((m - 0.5).abs() <= 0.02, "{m}");
    }

    #[test]
    fn mixture_is_bimodal() {
        let x = sample_input(&InputDist::standard(InputKind::GaussMixture), 10_000, 3).unwrap();
        let mut hist = [0usize; 10];
        for v in &x {
            hist[((v * 10.0) as usize).min(9)] += 1;
        }
        // Peaks in the bins holding 0.3 and 0.7, a trough at 0.5.
        assert!(hist[3] > 2 * hist[5] && hist[7] > 2 * hist[5], "{hist:?}");
        assert!(hist[3] > hist[0] && hist[7] > hist[9]);
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let d = InputDist::standard(InputKind::GaussAtOne);
        assert_eq!(
            sample_input(&d, 100, 5).unwrap(),
            sample_input(&d, 100, 5).unwrap()
        );
        assert_ne!(
            sample_input(&d, 100, 5).unwrap(),
            sample_input(&d, 100, 6).unwrap()
        );
    }

    #[test]
    fn rejects_nonpositive_width() {
        let d = InputDist::new(InputKind::GaussAtZero, 0.0);
        assert!(matches!(
            sample_input(&d, 10, 0),
            Err(Error::InvalidParameter(_))
        ));
        let u = InputDist::standard(InputKind::Uniform);
        assert!(matches!(
            sample_input(&u, 0, 0),
            Err(Error::InvalidParameter(_))
        ));
    }
}
