//! Linear deterministic relations `Y = A X` in `R^d` with isotropic
//! Gaussian reference families.
//!
//! With `τ(B) = tr(B)/d`, the statistic
//! `Δ = ln τ(A Σ_X Aᵀ) − ln τ(A Aᵀ) − ln τ(Σ_X)` is close to zero when `Σ_X`
//! is chosen independently of `A`. The direction whose `Δ` is closer to zero
//! is preferred.

use log::warn;
use nalgebra::{DMatrix, SVD};

use crate::error::{Error, Result};
use crate::preprocess::mean_cov;
use crate::types::{Direction, MultiSample, UNDECIDED_TOL};

fn check_square(b: &DMatrix<f64>) -> Result<usize> {
    if b.nrows() != b.ncols() || b.nrows() == 0 {
        return Err(Error::NotSquare {
            rows: b.nrows(),
            cols: b.ncols(),
        });
    }
    Ok(b.nrows())
}

/// Renormalized trace `tr(B) / d`.
pub fn renorm_trace(b: &DMatrix<f64>) -> Result<f64> {
    let d = check_square(b)?;
    Ok(b.trace() / d as f64)
}

fn positive_trace(b: &DMatrix<f64>) -> Result<f64> {
    let t = renorm_trace(b)?;
    if !(t > 0.0) {
        return Err(Error::NonPositiveTrace(t));
    }
    Ok(t)
}

/// `Δ(A, Σ) = ln τ(A Σ Aᵀ) − ln τ(A Aᵀ) − ln τ(Σ)`.
pub fn delta(a: &DMatrix<f64>, sigma: &DMatrix<f64>) -> Result<f64> {
    let d = check_square(a)?;
    if check_square(sigma)? != d {
        return Err(Error::DimensionMismatch(format!(
            "A is {d}x{d} but covariance is {0}x{0}",
            sigma.nrows()
        )));
    }
    let image = a * sigma * a.transpose();
    let gram = a * a.transpose();
    // One logarithm, so power-of-two rescalings cancel exactly.
    let ratio = positive_trace(&image)? / (positive_trace(&gram)? * positive_trace(sigma)?);
    Ok(ratio.ln())
}

/// `ln det Σ` via Cholesky; fails unless `Σ` is symmetric positive definite.
fn log_det_spd(sigma: &DMatrix<f64>) -> Result<f64> {
    check_square(sigma)?;
    let scale = sigma.abs().max().max(f64::MIN_POSITIVE);
    if (sigma - sigma.transpose()).abs().max() > 1e-10 * scale {
        return Err(Error::NotPositiveDefinite);
    }
    let chol = sigma.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
    Ok(2.0
        * chol
            .l_dirty()
            .diagonal()
            .iter()
            .map(|v| v.ln())
            .sum::<f64>())
}

/// Relative entropy from `N(μ, Σ)` to the closest isotropic Gaussian:
/// `½ (d ln τ(Σ) − ln det Σ)`. Nonnegative, zero iff `Σ ∝ I`.
pub fn kl_to_isotropic(sigma: &DMatrix<f64>) -> Result<f64> {
    let logdet = log_det_spd(sigma)?;
    let d = sigma.nrows() as f64;
    let value = 0.5 * (d * renorm_trace(sigma)?.ln() - logdet);
    Ok(value.max(0.0))
}

/// Terms of the decomposition
/// `D(p_Y‖𝓔_Y) = D(p_X‖𝓔_X) + D(u‖A⁻¹𝓔_Y) + (d/2) Δ` for Gaussian `X`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub kl_cause: f64,
    pub kl_effect: f64,
    /// `D(u ‖ A⁻¹𝓔_Y)`, where `u = N(μ, τ(Σ_X) I)` is the projection of the cause.
    pub kl_function: f64,
    pub delta: f64,
    pub dim: usize,
}

impl Decomposition {
    /// `D(p_Y‖𝓔_Y) − D(p_X‖𝓔_X) − D(u‖A⁻¹𝓔_Y) − (d/2) Δ`; zero up to rounding.
    pub fn residual(&self) -> f64 {
        self.kl_effect - self.kl_cause - self.kl_function - 0.5 * self.dim as f64 * self.delta
    }
}

pub fn decomposition(a: &DMatrix<f64>, sigma_x: &DMatrix<f64>) -> Result<Decomposition> {
    let d = check_square(a)?;
    let sigma_y = a * sigma_x * a.transpose();
    // Relative entropy is invariant under the bijection A, so
    // D(u ‖ A⁻¹𝓔_Y) = min_c D(N(0, τ(Σ_X) A Aᵀ) ‖ N(0, c I)), the isotropic
    // distance of τ(Σ_X) A Aᵀ. The scalar factor drops out, and A Aᵀ has the
    // same spectrum as Aᵀ A.
    let image = a * a.transpose() * renorm_trace(sigma_x)?;
    Ok(Decomposition {
        kl_cause: kl_to_isotropic(sigma_x)?,
        kl_effect: kl_to_isotropic(&sigma_y)?,
        kl_function: kl_to_isotropic(&image)?,
        delta: delta(a, sigma_x)?,
        dim: d,
    })
}

/// Least-squares fit of `y ≈ A x` on centered data.
#[derive(Debug, Clone)]
pub struct LinearModel {
    pub a: DMatrix<f64>,
    pub sigma_x: DMatrix<f64>,
    pub sigma_y: DMatrix<f64>,
    pub dim: usize,
    /// `‖Y − X Aᵀ‖_F / ‖Y‖_F` on centered data.
    pub relative_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Fits whose `A` (or design matrix) has a larger condition number are rejected.
    pub max_condition: f64,
    /// A warning is logged when the relative residual exceeds this.
    pub residual_warning: f64,
    /// Regress `x` on `y` for the reverse model instead of inverting the forward fit.
    pub refit_reverse: bool,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            max_condition: 1e12,
            residual_warning: 0.05,
            refit_reverse: false,
        }
    }
}

fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = SVD::new(m.clone(), false, false).singular_values;
    let max = sv.max();
    let min = sv.min();
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}

fn centered(s: &MultiSample) -> (DMatrix<f64>, DMatrix<f64>) {
    let data = s.to_matrix();
    let (mean, cov) = mean_cov(&data);
    let mut c = data;
    for mut row in c.row_iter_mut() {
        row -= mean.transpose();
    }
    (c, cov)
}

/// Ordinary least squares of `y` on `x` after centering both.
pub fn fit_linear(x: &MultiSample, y: &MultiSample, opts: &TraceOptions) -> Result<LinearModel> {
    if x.rows() != y.rows() || x.dim() != y.dim() {
        return Err(Error::DimensionMismatch(format!(
            "x is {}x{}, y is {}x{}",
            x.rows(),
            x.dim(),
            y.rows(),
            y.dim()
        )));
    }
    let (xc, sigma_x) = centered(x);
    let (yc, sigma_y) = centered(y);
    let design_cond = condition_number(&xc);
    if !(design_cond < opts.max_condition) {
        return Err(Error::SingularFit(design_cond));
    }
    let svd = SVD::new(xc.clone(), true, true);
    let at = svd
        .solve(&yc, 0.0)
        .map_err(|_| Error::SingularFit(design_cond))?;
    let a = at.transpose();
    let cond = condition_number(&a);
    if !(cond < opts.max_condition) {
        return Err(Error::SingularFit(cond));
    }
    let resid = (&yc - &xc * &at).norm();
    let scale = yc.norm();
    let relative_residual = if scale > 0.0 { resid / scale } else { 0.0 };
    Ok(LinearModel {
        a,
        sigma_x,
        sigma_y,
        dim: x.dim(),
        relative_residual,
    })
}

#[derive(Debug, Clone)]
pub struct LinearInference {
    pub direction: Direction,
    pub delta_xy: f64,
    pub delta_yx: f64,
    pub model: LinearModel,
    /// Set when the linear fit left a relative residual above the threshold.
    pub poor_fit: bool,
}

/// Chooses the direction whose `Δ` is closer to zero.
pub fn infer_linear_direction(
    x: &MultiSample,
    y: &MultiSample,
    opts: &TraceOptions,
) -> Result<LinearInference> {
    let model = fit_linear(x, y, opts)?;
    let poor_fit = model.relative_residual > opts.residual_warning;
    if poor_fit {
        warn!(
            "linear fit leaves relative residual {:.3} (threshold {})",
            model.relative_residual, opts.residual_warning
        );
    }
    let reverse = if opts.refit_reverse {
        fit_linear(y, x, opts)?.a
    } else {
        model
            .a
            .clone()
            .try_inverse()
            .ok_or(Error::SingularFit(f64::INFINITY))?
    };
    let delta_xy = delta(&model.a, &model.sigma_x)?;
    let delta_yx = delta(&reverse, &model.sigma_y)?;
    let gap = delta_xy.abs() - delta_yx.abs();
    let direction = if gap.abs() <= UNDECIDED_TOL {
        Direction::Undecided
    } else if gap < 0.0 {
        Direction::XtoY
    } else {
        Direction::YtoX
    };
    Ok(LinearInference {
        direction,
        delta_xy,
        delta_yx,
        model,
        poor_fit,
    })
}
