//! Relative entropy between discrete densities and the orthogonality
//! identity that links it to the inference rule.

use rand::Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};

const SUM_TOL: f64 = 1e-12;

fn check_probability(p: &[f64]) -> Result<()> {
    if p.iter().any(|&v| !v.is_finite() || v < 0.0) {
        return Err(Error::NotNormalized(
            "entries must be finite and nonnegative",
        ));
    }
    if (p.iter().sum::<f64>() - 1.0).abs() > SUM_TOL {
        return Err(Error::NotNormalized("entries must sum to 1"));
    }
    Ok(())
}

/// Kullback-Leibler divergence `Σ p_i ln(p_i / q_i)` in nats, with `0 ln 0 = 0`.
pub fn discrete_kl(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    check_probability(p)?;
    check_probability(q)?;
    let mut acc = 0.0;
    for (i, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Err(Error::SupportMismatch(i));
        }
        acc += pi * (pi / qi).ln();
    }
    // Rounding can leave a tiny negative value for p == q.
    Ok(acc.max(0.0))
}

/// Both sides of the orthogonality identity for three densities on a
/// common support.
///
/// `kl_defect = D(q‖s) − D(q‖r) − D(r‖s)` vanishes exactly when the
/// divergences are additive, and `cross_defect = Σ q ln(r/s) − Σ r ln(r/s)`
/// vanishes exactly when `q` and `r` have the same expectation of
/// `ln(r/s)`. The two defects are equal for every triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Orthogonality {
    pub kl_defect: f64,
    pub cross_defect: f64,
}

impl Orthogonality {
    pub fn discrepancy(&self) -> f64 {
        (self.kl_defect - self.cross_defect).abs()
    }
}

pub fn orthogonality(q: &[f64], r: &[f64], s: &[f64]) -> Result<Orthogonality> {
    if q.len() != r.len() || r.len() != s.len() {
        return Err(Error::LengthMismatch(q.len(), r.len().max(s.len())));
    }
    if let Some(i) = r.iter().zip(s).position(|(&ri, &si)| ri > 0.0 && si == 0.0) {
        return Err(Error::SupportMismatch(i));
    }
    let kl_defect = discrete_kl(q, s)? - discrete_kl(q, r)? - discrete_kl(r, s)?;
    let mut cross_defect = 0.0;
    for (i, ((&qi, &ri), &si)) in q.iter().zip(r).zip(s).enumerate() {
        if ri == 0.0 {
            if qi > 0.0 {
                return Err(Error::SupportMismatch(i));
            }
            continue;
        }
        cross_defect += (qi - ri) * (ri / si).ln();
    }
    Ok(Orthogonality {
        kl_defect,
        cross_defect,
    })
}

/// A density on `k` points drawn uniformly from the probability simplex.
pub fn random_density<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..k)
        .map(|_| rng.sample::<f64, _>(Exp1) + 1e-300)
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kl_examples() {
        assert_eq!(discrete_kl(&[0.5, 0.5], &[0.5, 0.5]).unwrap(), 0.0);
        let v = discrete_kl(&[1.0, 0.0], &[0.5, 0.5]).unwrap();
        assert!((v - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(
            discrete_kl(&[0.5, 0.5], &[1.0, 0.0]),
            Err(Error::SupportMismatch(1))
        );
    }

    #[test]
    fn kl_rejects_invalid_vectors() {
        assert!(matches!(
            discrete_kl(&[0.6, 0.6], &[0.5, 0.5]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            discrete_kl(&[1.0], &[0.5, 0.5]),
            Err(Error::LengthMismatch(1, 2))
        ));
        assert!(matches!(
            discrete_kl(&[1.5, -0.5], &[0.5, 0.5]),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn random_densities_are_valid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for k in [1, 2, 10, 1000] {
            let p = random_density(k, &mut rng);
            assert_eq!(p.len(), k);
            assert!(p.iter().all(|&v| v > 0.0));
            assert!(check_probability(&p).is_ok());
        }
    }

    fn simplex(len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.01f64..1.0, len).prop_map(|w| {
            let t: f64 = w.iter().sum();
            w.into_iter().map(|v| v / t).collect()
        })
    }

    proptest! {
        #[test]
        fn kl_is_nonnegative((p, q) in (2usize..12).prop_flat_map(|n| (simplex(n), simplex(n)))) {
            prop_assert!(discrete_kl(&p, &q).unwrap() >= 0.0);
            prop_assert_eq!(discrete_kl(&p, &p).unwrap(), 0.0);
        }

        #[test]
        fn kl_zero_only_for_equal((p, q) in (2usize..12).prop_flat_map(|n| (simplex(n), simplex(n)))) {
            let gap = p.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            prop_assume!(gap > 1e-6);
            prop_assert!(discrete_kl(&p, &q).unwrap() > 0.0);
        }

        #[test]
        fn orthogonality_identity((q, r, s) in (2usize..16).prop_flat_map(|n| (simplex(n), simplex(n), simplex(n)))) {
            let o = orthogonality(&q, &r, &s).unwrap();
            prop_assert!(o.discrepancy() <= 1e-10);
        }
    }
}
