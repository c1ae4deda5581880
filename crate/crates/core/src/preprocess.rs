//! Affine preprocessing that maps data onto the chosen reference family.
//!
//! After rescaling both variables the same way, the entropies of the two
//! projections onto the reference family coincide, so only the entropy
//! difference of the data themselves remains to be estimated.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::types::{MultiSample, ReferenceFamily};

/// Values mapped to `[0, 1]` with the parameters of the map.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub values: Vec<f64>,
    /// `max - min` of the input.
    pub scale: f64,
    /// `min` of the input.
    pub offset: f64,
}

impl Normalized {
    pub fn invert(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|v| v * self.scale + self.offset)
            .collect()
    }
}

/// Affine map with minimum 0 and maximum 1: `(v - min) / (max - min)`.
pub fn normalize_uniform(values: &[f64]) -> Result<Normalized> {
    if values.len() < 2 {
        return Err(Error::TooFewObservations {
            got: values.len(),
            need: 2,
        });
    }
    let (min, max) = min_max(values);
    let scale = max - min;
    if !(scale > 0.0) {
        return Err(Error::ConstantInput);
    }
    Ok(Normalized {
        values: values.iter().map(|v| (v - min) / scale).collect(),
        scale,
        offset: min,
    })
}

/// Values standardized to mean 0, variance 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardized {
    pub values: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation (divisor `m`).
    pub std: f64,
}

impl Standardized {
    pub fn invert(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|v| v * self.std + self.mean)
            .collect()
    }
}

/// Affine map to zero mean and unit population variance.
pub fn standardize_gaussian(values: &[f64]) -> Result<Standardized> {
    if values.len() < 2 {
        return Err(Error::TooFewObservations {
            got: values.len(),
            need: 2,
        });
    }
    let (mean, var) = mean_var(values);
    let std = var.sqrt();
    if !(std > 0.0) || std <= f64::EPSILON * mean.abs() {
        return Err(Error::ConstantInput);
    }
    Ok(Standardized {
        values: values.iter().map(|v| (v - mean) / std).collect(),
        mean,
        std,
    })
}

/// Applies the scalar preprocessing that belongs to `reference`.
pub fn preprocess(values: &[f64], reference: ReferenceFamily) -> Result<Vec<f64>> {
    match reference {
        ReferenceFamily::UniformUnit => Ok(normalize_uniform(values)?.values),
        ReferenceFamily::Gaussian => Ok(standardize_gaussian(values)?.values),
        ReferenceFamily::IsotropicGaussian => Err(Error::InvalidReference("isotropic")),
    }
}

pub(crate) fn min_max(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}

/// Mean and population variance, two-pass.
pub fn mean_var(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var)
}

/// Empirical mean vector and covariance (divisor `m`) of the rows of `data`.
pub fn mean_cov(data: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let m = data.nrows() as f64;
    let mean = data.row_mean().transpose();
    let mut centered = data.clone();
    for mut row in centered.row_iter_mut() {
        row -= mean.transpose();
    }
    let cov = centered.transpose() * &centered / m;
    (mean, cov)
}

/// Whitened sample with the linear map that produced it.
#[derive(Debug, Clone)]
pub struct Whitened {
    pub sample: MultiSample,
    /// Symmetric whitening matrix `Σ^{-1/2}`; output rows are `W (x - mean)`.
    pub transform: DMatrix<f64>,
    pub mean: DVector<f64>,
}

/// Relative eigenvalue floor below which a covariance counts as singular.
const SINGULAR_RTOL: f64 = 1e-12;

/// Symmetric (ZCA) whitening: centers the data and applies `Σ^{-1/2}`.
pub fn whiten(sample: &MultiSample) -> Result<Whitened> {
    let data = sample.to_matrix();
    let (mean, cov) = mean_cov(&data);
    let transform = inverse_sqrt_spd(&cov)?;
    let mut centered = data;
    for mut row in centered.row_iter_mut() {
        row -= mean.transpose();
    }
    let out = centered * transform.transpose();
    Ok(Whitened {
        sample: MultiSample::from_matrix(&out)?,
        transform,
        mean,
    })
}

fn inverse_sqrt_spd(cov: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = SymmetricEigen::new(cov.clone());
    let max = eig.eigenvalues.max();
    if !(max > 0.0) || eig.eigenvalues.iter().any(|&l| l <= SINGULAR_RTOL * max) {
        return Err(Error::SingularCovariance);
    }
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
    Ok(&eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose())
}
