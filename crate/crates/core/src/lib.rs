//! Information-geometric causal inference (IGCI) for two variables related
//! by an invertible, nearly deterministic function.
//!
//! The decision rests on the sign of
//! `C_{X→Y} = D(p_X ‖ 𝓔_X) − D(p_Y ‖ 𝓔_Y)`, the difference of the relative
//! entropy distances of the two marginals to a family of smooth reference
//! densities. If X causes Y, the irregularities of the effect are those of
//! the cause plus those of the function, so `C_{X→Y} < 0`.
//!
//! - [`estimators`]: entropy- and slope-based estimates of the score.
//! - [`trace`]: the linear multivariate case with isotropic Gaussian reference.
//! - [`simulation`]: seeded Monte-Carlo benchmark harness.
//! - [`io`]: data files, pair manifests, lag alignment and report records.

// NaN-rejecting checks are written as `!(x > 0.0)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod divergence;
pub mod error;
pub mod estimators;
pub mod io;
pub mod preprocess;
pub mod simulation;
pub mod special;
pub mod trace;
pub mod types;

pub use divergence::{discrete_kl, orthogonality, random_density, Orthogonality};
pub use error::{Error, Result};
pub use estimators::{
    igci_score, reference_shift, slope_criterion, spacing_entropy, EstimatorKind, IgciReport,
};
pub use preprocess::{normalize_uniform, standardize_gaussian, whiten};
pub use special::digamma;
pub use types::{Direction, MultiSample, ReferenceFamily, SamplePair, UNDECIDED_TOL};
