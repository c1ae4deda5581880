use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Correlations below this are flagged as a poor alignment.
pub const LOW_CORRELATION: f64 = 0.5;

const MIN_OVERLAP: usize = 3;

/// Best integer shift of `b` relative to `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagAlignment {
    /// `a[t]` is paired with `b[t + lag]`.
    pub lag: i64,
    pub correlation: f64,
    pub overlap_length: usize,
}

impl LagAlignment {
    pub fn low_correlation(&self) -> bool {
        self.correlation < LOW_CORRELATION
    }
}

/// The overlapping segments `(a[t], b[t + lag])`.
pub fn lagged_overlap<'a>(a: &'a [f64], b: &'a [f64], lag: i64) -> (&'a [f64], &'a [f64]) {
    let start = if lag < 0 { (-lag) as usize } else { 0 };
    let shift = |t: usize| (t as i64 + lag) as usize;
    let end = if lag >= 0 {
        a.len().min(b.len().saturating_sub(lag as usize))
    } else {
        a.len().min(b.len() + (-lag) as usize)
    };
    if end <= start {
        return (&a[0..0], &b[0..0]);
    }
    (&a[start..end], &b[shift(start)..shift(end)])
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa > 0.0 && sbb > 0.0 {
        Some((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
    } else {
        None
    }
}

/// Searches lags in `[-max_lag, max_lag]` for the largest Pearson correlation
/// on the overlap. Ties go to the smaller `|lag|`, then to the negative lag.
pub fn align_lag(a: &[f64], b: &[f64], max_lag: usize) -> Result<LagAlignment> {
    let need = max_lag + MIN_OVERLAP;
    if a.len() < need || b.len() < need {
        return Err(Error::TooFewObservations {
            got: a.len().min(b.len()),
            need,
        });
    }
    crate::types::check_finite(a)?;
    crate::types::check_finite(b)?;
    let mut best: Option<LagAlignment> = None;
    let mut any_constant = false;
    let candidates = std::iter::once(0i64).chain((1..=max_lag as i64).flat_map(|l| [-l, l]));
    for lag in candidates {
        let (sa, sb) = lagged_overlap(a, b, lag);
        if sa.len() < MIN_OVERLAP {
            continue;
        }
        match pearson(sa, sb) {
            Some(r) => {
                if best.is_none_or(|b| r > b.correlation) {
                    best = Some(LagAlignment {
                        lag,
                        correlation: r,
                        overlap_length: sa.len(),
                    });
                }
            }
            None => any_constant = true,
        }
    }
    match best {
        Some(b) => Ok(b),
        None if any_constant => Err(Error::ConstantInput),
        None => Err(Error::TooFewObservations {
            got: 0,
            need: MIN_OVERLAP,
        }),
    }
}
