use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::normal_cdf;

/// Number of Gaussian CDFs in the random mechanism.
pub const CDF_MIX_COMPONENTS: usize = 5;
const CDF_MIX_MAX_WIDTH: f64 = 0.1;
const CDF_MIX_MIN_WIDTH: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MechanismKind {
    /// (a) `x^{1/3}`
    CubeRoot,
    /// (b) `x^{1/2}`
    SquareRoot,
    /// (c) `x²`
    Square,
    /// (d) `x³`
    Cube,
    /// (e) random convex combination of five Gaussian CDFs
    CdfMix,
}

impl MechanismKind {
    pub const ALL: [MechanismKind; 5] = [
        Self::CubeRoot,
        Self::SquareRoot,
        Self::Square,
        Self::Cube,
        Self::CdfMix,
    ];

    pub fn letter(self) -> char {
        match self {
            Self::CubeRoot => 'a',
            Self::SquareRoot => 'b',
            Self::Square => 'c',
            Self::Cube => 'd',
            Self::CdfMix => 'e',
        }
    }
}

impl fmt::Display for MechanismKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::CubeRoot => "x^(1/3)",
            Self::SquareRoot => "x^(1/2)",
            Self::Square => "x^2",
            Self::Cube => "x^3",
            Self::CdfMix => "s_5(x)",
        })
    }
}

/// `s(x) = Σ α_i Φ(x | μ_i, σ_i)` with `α` on the simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfMix {
    pub weights: Vec<f64>,
    pub means: Vec<f64>,
    pub widths: Vec<f64>,
}

impl CdfMix {
    pub fn new(weights: Vec<f64>, means: Vec<f64>, widths: Vec<f64>) -> Result<Self> {
        if weights.len() != means.len() || means.len() != widths.len() || weights.is_empty() {
            return Err(Error::InvalidParameter(
                "component lists must be nonempty and equal length".into(),
            ));
        }
        if weights.iter().any(|&a| !(a >= 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12
        {
            return Err(Error::InvalidParameter(
                "weights must be nonnegative and sum to 1".into(),
            ));
        }
        if widths.iter().any(|&s| !(s >= 0.0)) {
            return Err(Error::InvalidParameter("widths must be nonnegative".into()));
        }
        Ok(Self {
            weights,
            means,
            widths,
        })
    }

    /// Weights uniform on `[0, 1]` then normalized; means uniform on `[0, 1]`;
    /// widths uniform on `[0, 0.1]`, floored at `1e-4`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut weights: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let total: f64 = weights.iter().sum();
        if total > 0.0 {
            weights.iter_mut().for_each(|w| *w /= total);
        } else {
            weights.fill(1.0 / n as f64);
        }
        let means = (0..n).map(|_| rng.random::<f64>()).collect();
        let widths = (0..n)
            .map(|_| (rng.random::<f64>() * CDF_MIX_MAX_WIDTH).max(CDF_MIX_MIN_WIDTH))
            .collect();
        Self {
            weights,
            means,
            widths,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.weights
            .iter()
            .zip(&self.means)
            .zip(&self.widths)
            .map(|((a, mu), s)| a * normal_cdf(x, *mu, *s))
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }
}

/// A concrete mechanism, with parameters where the kind has any.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Mechanism {
    CubeRoot,
    SquareRoot,
    Square,
    Cube,
    CdfMix(CdfMix),
}

impl Mechanism {
    /// Instantiates `kind`, drawing fresh parameters for the random mechanism.
    pub fn draw<R: Rng + ?Sized>(kind: MechanismKind, rng: &mut R) -> Self {
        match kind {
            MechanismKind::CubeRoot => Self::CubeRoot,
            MechanismKind::SquareRoot => Self::SquareRoot,
            MechanismKind::Square => Self::Square,
            MechanismKind::Cube => Self::Cube,
            MechanismKind::CdfMix => Self::CdfMix(CdfMix::random(CDF_MIX_COMPONENTS, rng)),
        }
    }

    pub fn kind(&self) -> MechanismKind {
        match self {
            Self::CubeRoot => MechanismKind::CubeRoot,
            Self::SquareRoot => MechanismKind::SquareRoot,
            Self::Square => MechanismKind::Square,
            Self::Cube => MechanismKind::Cube,
            Self::CdfMix(_) => MechanismKind::CdfMix,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::CubeRoot => x.cbrt(),
            Self::SquareRoot => x.sqrt(),
            Self::Square => x * x,
            Self::Cube => x * x * x,
            Self::CdfMix(s) => s.eval(x),
        }
    }
}

/// Elementwise `f(x)`.
pub fn apply_mechanism(spec: &Mechanism, x: &[f64]) -> Vec<f64> {
    x.iter().map(|&v| spec.eval(v)).collect()
}
