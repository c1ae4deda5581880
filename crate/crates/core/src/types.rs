//! Domain types shared by every module.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scores with absolute value at or below this are reported as undecided.
pub const UNDECIDED_TOL: f64 = 1e-12;

/// Paired scalar observations `(x_i, y_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePair {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl SamplePair {
    pub const MIN_LEN: usize = 3;

    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch(x.len(), y.len()));
        }
        if x.len() < Self::MIN_LEN {
            return Err(Error::TooFewObservations {
                got: x.len(),
                need: Self::MIN_LEN,
            });
        }
        check_finite(&x)?;
        check_finite(&y)?;
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// The same observations with the roles of the two variables exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            x: self.y.clone(),
            y: self.x.clone(),
        }
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.x, self.y)
    }
}

pub(crate) fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(idx) => Err(Error::NonFinite {
            idx,
            value: values[idx],
        }),
        None => Ok(()),
    }
}

/// `m` observations of a `d`-dimensional vector, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiSample {
    data: Vec<f64>,
    rows: usize,
    dim: usize,
}

impl MultiSample {
    /// Builds a sample from row vectors. Requires `m > d` so the empirical
    /// covariance can be nonsingular.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map(Vec::len).unwrap_or(0);
        if dim == 0 {
            return Err(Error::TooFewObservations {
                got: rows.len(),
                need: 2,
            });
        }
        let mut data = Vec::with_capacity(rows.len() * dim);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::RaggedSample {
                    row: i,
                    got: r.len(),
                    expected: dim,
                });
            }
            data.extend_from_slice(r);
        }
        Self::from_row_major(data, rows.len(), dim)
    }

    pub fn from_row_major(data: Vec<f64>, rows: usize, dim: usize) -> Result<Self> {
        if dim == 0 || data.len() != rows * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} values cannot form {rows} rows of dimension {dim}",
                data.len()
            )));
        }
        if rows <= dim {
            return Err(Error::TooFewObservations {
                got: rows,
                need: dim + 1,
            });
        }
        check_finite(&data)?;
        Ok(Self { data, rows, dim })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_matrix(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.dim, &self.data)
    }

    pub(crate) fn from_matrix(m: &nalgebra::DMatrix<f64>) -> Result<Self> {
        let mut data = Vec::with_capacity(m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            data.extend(m.row(i).iter().copied());
        }
        Self::from_row_major(data, m.nrows(), m.ncols())
    }
}

/// The family of smooth reference distributions the data are measured
/// against. Determines the preprocessing applied before scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceFamily {
    /// Uniform on `[0, 1]`; data are rescaled to min 0 and max 1.
    #[serde(rename = "uniform")]
    UniformUnit,
    /// All Gaussians; data are standardized to mean 0 and variance 1.
    Gaussian,
    /// Isotropic Gaussians on `R^d`; only used by the trace method.
    #[serde(rename = "isotropic")]
    IsotropicGaussian,
}

impl ReferenceFamily {
    pub fn name(self) -> &'static str {
        match self {
            Self::UniformUnit => "uniform",
            Self::Gaussian => "gaussian",
            Self::IsotropicGaussian => "isotropic",
        }
    }
}

impl fmt::Display for ReferenceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReferenceFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" => Ok(Self::UniformUnit),
            "gaussian" => Ok(Self::Gaussian),
            "isotropic" => Ok(Self::IsotropicGaussian),
            _ => Err(Error::InvalidParameter(format!(
                "unknown reference family '{s}'"
            ))),
        }
    }
}

/// Inferred causal direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "x->y")]
    XtoY,
    #[serde(rename = "y->x")]
    YtoX,
    #[serde(rename = "undecided")]
    Undecided,
}

impl Direction {
    /// Sign rule: a negative score means X causes Y.
    pub fn from_score(score: f64, tol: f64) -> Self {
        if score < -tol {
            Self::XtoY
        } else if score > tol {
            Self::YtoX
        } else {
            Self::Undecided
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Self::XtoY => Self::YtoX,
            Self::YtoX => Self::XtoY,
            Self::Undecided => Self::Undecided,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::XtoY => "x->y",
            Self::YtoX => "y->x",
            Self::Undecided => "undecided",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x->y" | "xtoy" | "->" => Ok(Self::XtoY),
            "y->x" | "ytox" | "<-" => Ok(Self::YtoX),
            "undecided" => Ok(Self::Undecided),
            _ => Err(Error::InvalidParameter(format!("unknown direction '{s}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_pair_rejects_bad_input() {
        assert_eq!(
            SamplePair::new(vec![1.0, 2.0, 3.0], vec![1.0, 2.0]),
            Err(Error::LengthMismatch(3, 2))
        );
        assert!(matches!(
            SamplePair::new(vec![1.0, 2.0], vec![1.0, 2.0]),
            Err(Error::TooFewObservations { .. })
        ));
        assert!(matches!(
            SamplePair::new(vec![1.0, f64::NAN, 3.0], vec![1.0, 2.0, 3.0]),
            Err(Error::NonFinite { idx: 1, .. })
        ));
    }

    #[test]
    fn multisample_needs_more_rows_than_dims() {
        let rows = vec![vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]];
        assert!(matches!(
            MultiSample::from_rows(&rows),
            Err(Error::TooFewObservations { .. })
        ));
        let ragged = vec![vec![1.0, 2.0], vec![1.0], vec![0.0, 0.0]];
        assert!(matches!(
            MultiSample::from_rows(&ragged),
            Err(Error::RaggedSample { row: 1, .. })
        ));
    }

    #[test]
    fn direction_sign_rule() {
        assert_eq!(Direction::from_score(-0.1, UNDECIDED_TOL), Direction::XtoY);
        assert_eq!(Direction::from_score(0.1, UNDECIDED_TOL), Direction::YtoX);
        assert_eq!(
            Direction::from_score(1e-13, UNDECIDED_TOL),
            Direction::Undecided
        );
        assert_eq!(
            Direction::from_score(-1e-12, UNDECIDED_TOL),
            Direction::Undecided
        );
    }

    #[test]
    fn parse_round_trip() {
        for d in [Direction::XtoY, Direction::YtoX, Direction::Undecided] {
            assert_eq!(d.as_str().parse::<Direction>().unwrap(), d);
        }
        for r in [
            ReferenceFamily::UniformUnit,
            ReferenceFamily::Gaussian,
            ReferenceFamily::IsotropicGaussian,
        ] {
            assert_eq!(r.name().parse::<ReferenceFamily>().unwrap(), r);
        }
    }
}
