//! Special functions: digamma and the Gaussian distribution function.

use crate::error::{Error, Result};

/// B_{2k} / (2k) for k = 1..7, coefficients of the asymptotic series
/// ψ(x) ~ ln x − 1/(2x) − Σ B_{2k} / (2k x^{2k}).
const ASYMPTOTIC: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// Below this the argument is shifted upward with ψ(x) = ψ(x+1) − 1/x.
const ASYMPTOTIC_FROM: f64 = 10.0;

/// Digamma function ψ(x) = d/dx ln Γ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain("digamma requires a finite positive argument"));
    }
    let mut acc = 0.0;
    let mut z = x;
    while z < ASYMPTOTIC_FROM {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    let mut pow = inv2;
    let mut series = 0.0;
    for c in ASYMPTOTIC {
        series += c * pow;
        pow *= inv2;
    }
    Ok(acc + z.ln() - 0.5 / z - series)
}

/// ψ(n) for an integer sample size; `n` must be at least 1.
pub(crate) fn digamma_count(n: usize) -> f64 {
    digamma(n as f64).expect("sample sizes are positive")
}

/// Gaussian CDF Φ(x | mean, sd). A zero `sd` degenerates to a unit step.
pub fn normal_cdf(x: f64, mean: f64, sd: f64) -> f64 {
    if sd == 0.0 {
        return if x < mean { 0.0 } else { 1.0 };
    }
    0.5 * libm::erfc(-(x - mean) / (sd * std::f64::consts::SQRT_2))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values computed with mpmath at 30 digits.
    #[allow(clippy::excessive_precision)]
    const REFERENCE: [(f64, f64); 9] = [
        (0.001, -1000.575571931810300471),
        (0.5, -1.963510026021423479441),
        (1.0, -0.5772156649015328606065),
        (2.0, 0.4227843350984671393935),
        (3.0, 0.9227843350984671393935),
        (7.25, 1.910453526883736028382),
        (10.0, 2.251752589066721107647),
        (123.456, 4.811829323828985387322),
        (1.0e6, 13.81551005796419077077),
    ];

    #[test]
    fn digamma_matches_high_precision_reference() {
        for (x, want) in REFERENCE {
            let got = digamma(x).unwrap();
            assert!((got - want).abs() <= 1e-10, "psi({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn digamma_known_values() {
        let euler = 0.577_215_664_901_532_9;
        assert!((digamma(1.0).unwrap() + euler).abs() < 1e-12);
        assert!((digamma(2.0).unwrap() - (1.0 - euler)).abs() < 1e-12);
        let half = -euler - 2.0 * std::f64::consts::LN_2;
        assert!((digamma(0.5).unwrap() - half).abs() < 1e-12);
    }

    #[test]
    fn digamma_domain() {
        assert!(digamma(0.0).is_err());
        assert!(digamma(-1.5).is_err());
        assert!(digamma(f64::NAN).is_err());
    }

    #[test]
    fn cdf_at_mean_is_half() {
        assert_eq!(normal_cdf(0.5, 0.5, 0.05), 0.5);
        assert!((normal_cdf(1.96, 0.0, 1.0) - 0.975_002_104_851_780).abs() < 1e-12);
        assert_eq!(normal_cdf(0.2, 0.3, 0.0), 0.0);
    }

    proptest::proptest! {
        #[test]
        fn digamma_recurrence(x in 1e-3f64..100.0) {
            let lhs = digamma(x + 1.0).unwrap() - digamma(x).unwrap();
            proptest::prop_assert!((lhs - 1.0 / x).abs() <= 1e-10);
        }
    }
}
