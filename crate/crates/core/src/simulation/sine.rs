use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::Tally;
use super::inputs::{sample_input_with, InputDist, InputKind};
use super::{stream_id, substream};
use crate::error::{Error, Result};
use crate::estimators::{igci_score, EstimatorKind};
use crate::types::{Direction, ReferenceFamily, SamplePair};

/// Small periodic perturbation of the identity: `y = x + ε sin(ω x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SineConfig {
    pub epsilon: f64,
    pub omega: f64,
    pub dists: Vec<InputDist>,
    pub m: usize,
    pub repetitions: usize,
    pub estimator: EstimatorKind,
    pub reference: ReferenceFamily,
    pub seed: u64,
}

impl Default for SineConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.005,
            omega: 40.0,
            dists: sine_distributions(),
            m: 1000,
            repetitions: 100,
            estimator: EstimatorKind::EntropySpacing,
            reference: ReferenceFamily::UniformUnit,
            seed: 0,
        }
    }
}

/// `N(0,1)`, `N(0,σ²)`, `N(0.5,σ²)`, `N(1,σ²)` and the two-bump mixture.
pub fn sine_distributions() -> Vec<InputDist> {
    vec![
        InputDist::new(InputKind::GaussAtZero, 1.0),
        InputDist::standard(InputKind::GaussAtZero),
        InputDist::standard(InputKind::GaussCentered),
        InputDist::standard(InputKind::GaussAtOne),
        InputDist::standard(InputKind::GaussMixture),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SineResult {
    pub dist: InputDist,
    pub label: String,
    #[serde(flatten)]
    pub tally: Tally,
    pub accuracy_pct: f64,
}

/// Accuracy per input distribution. Inputs are not truncated here.
pub fn run_sine(config: &SineConfig) -> Result<Vec<SineResult>> {
    if !((config.epsilon * config.omega).abs() < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "|epsilon * omega| must be below 1 for a monotone map, got {}",
            config.epsilon * config.omega
        )));
    }
    if config.m < SamplePair::MIN_LEN || config.repetitions == 0 {
        return Err(Error::InvalidParameter(
            "need m >= 3 and at least one repetition".into(),
        ));
    }
    config
        .dists
        .iter()
        .enumerate()
        .map(|(d, dist)| {
            let decisions: Vec<Direction> = (0..config.repetitions)
                .into_par_iter()
                .map(|rep| {
                    let mut rng = substream(config.seed, stream_id(d, rep));
                    let x = sample_input_with(dist, config.m, false, &mut rng)?;
                    let y = x
                        .iter()
                        .map(|&v| v + config.epsilon * (config.omega * v).sin())
                        .collect();
                    let pair = SamplePair::new(x, y)?;
                    Ok(igci_score(&pair, config.reference, config.estimator)
                        .map(|r| r.direction)
                        .unwrap_or(Direction::Undecided))
                })
                .collect::<Result<_>>()?;
            let mut tally = Tally::default();
            decisions
                .iter()
                .for_each(|&dec| tally.record(dec, Direction::XtoY));
            Ok(SineResult {
                dist: *dist,
                label: dist.to_string(),
                tally,
                accuracy_pct: tally.accuracy_pct(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_amplitude_is_always_undecided() {
        let cfg = SineConfig {
            epsilon: 0.0,
            m: 300,
            repetitions: 10,
            ..SineConfig::default()
        };
        for r in run_sine(&cfg).unwrap() {
            assert_eq!(r.tally.undecided, 10, "{}", r.label);
        }
    }

    #[test]
    fn non_monotone_map_rejected() {
        let cfg = SineConfig {
            epsilon: 0.05,
            omega: 40.0,
            ..SineConfig::default()
        };
        assert!(run_sine(&cfg).is_err());
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let cfg = SineConfig {
            m: 500,
            repetitions: 1,
            seed: 77,
            ..SineConfig::default()
        };
        assert_eq!(run_sine(&cfg).unwrap(), run_sine(&cfg).unwrap());
    }

    #[test]
    fn default_widths() {
        let d = sine_distributions();
        assert_eq!(d[0].sigma, 1.0);
        assert!(d[1..]
            .iter()
            .all(|x| x.sigma == super::super::DEFAULT_WIDTH));
    }
}
