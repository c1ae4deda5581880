use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::inputs::{sample_input_with, InputDist, InputKind, DEFAULT_WIDTH};
use super::mechanisms::{Mechanism, MechanismKind};
use super::{stream_id, substream};
use crate::error::{Error, Result};
use crate::estimators::{igci_score, EstimatorKind};
use crate::types::{Direction, ReferenceFamily, SamplePair};

/// Additive noise distribution `E` in `Y = f(X) + λE`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NoiseKind {
    None,
    /// `U(0, 1)`
    Uniform,
    /// `N(0, 1)`
    Normal,
    /// Laplace with location 0 and the given scale.
    Laplace {
        scale: f64,
    },
}

impl NoiseKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::None => "none",
            Self::Uniform => "uniform",
            Self::Normal => "normal",
            Self::Laplace { .. } => "laplace",
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::None => 0.0,
            Self::Uniform => rng.random::<f64>(),
            Self::Normal => rng.sample(StandardNormal),
            Self::Laplace { scale } => {
                let u = rng.random::<f64>() - 0.5;
                -scale * u.signum() * (1.0 - 2.0 * u.abs()).ln()
            }
        }
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    /// Parses `none`, `uniform`, `normal` or `laplace`; Laplace gets the
    /// default width as its scale.
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Self::None),
            "uniform" => Ok(Self::Uniform),
            "normal" | "gaussian" => Ok(Self::Normal),
            "laplace" => Ok(Self::Laplace {
                scale: DEFAULT_WIDTH,
            }),
            _ => Err(Error::InvalidParameter(format!("unknown noise '{s}'"))),
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub lambda: f64,
}

impl NoiseSpec {
    pub const NONE: NoiseSpec = NoiseSpec {
        kind: NoiseKind::None,
        lambda: 0.0,
    };

    pub fn new(kind: NoiseKind, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "noise level must be >= 0, got {lambda}"
            )));
        }
        if (lambda == 0.0) != (kind == NoiseKind::None) {
            return Err(Error::InvalidParameter(
                "noise level must be zero exactly when there is no noise".into(),
            ));
        }
        if let NoiseKind::Laplace { scale } = kind {
            if !(scale > 0.0) {
                return Err(Error::InvalidParameter(
                    "Laplace scale must be positive".into(),
                ));
            }
        }
        Ok(Self { kind, lambda })
    }
}

/// Parameters of a 5×5 benchmark grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub noise: NoiseSpec,
    pub m: usize,
    pub repetitions: usize,
    pub estimator: EstimatorKind,
    pub reference: ReferenceFamily,
    pub seed: u64,
    /// Width parameter of the input densities.
    pub sigma: f64,
    /// Score `(y, x)` instead of `(x, y)`; the ground truth stays "generated
    /// input causes generated output".
    pub swap_roles: bool,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            noise: NoiseSpec::NONE,
            m: 1000,
            repetitions: 100,
            estimator: EstimatorKind::EntropySpacing,
            reference: ReferenceFamily::UniformUnit,
            seed: 0,
            sigma: DEFAULT_WIDTH,
            swap_roles: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub correct: usize,
    pub wrong: usize,
    pub undecided: usize,
}

impl Tally {
    pub fn record(&mut self, decided: Direction, truth: Direction) {
        if decided == Direction::Undecided {
            self.undecided += 1;
        } else if decided == truth {
            self.correct += 1;
        } else {
            self.wrong += 1;
        }
    }

    pub fn total(&self) -> usize {
        self.correct + self.wrong + self.undecided
    }

    /// Correct decisions as a percentage of all runs.
    pub fn accuracy_pct(&self) -> f64 {
        match self.total() {
            0 => 0.0,
            n => 100.0 * self.correct as f64 / n as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub input: InputKind,
    pub mechanism: MechanismKind,
    #[serde(flatten)]
    pub tally: Tally,
    pub accuracy_pct: f64,
}

impl CellResult {
    /// Table label such as `(B)(e)`.
    pub fn label(&self) -> String {
        format!("({})({})", self.input.letter(), self.mechanism.letter())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimGridResult {
    pub config: GridConfig,
    /// Row-major over inputs (A..E) then mechanisms (a..e).
    pub cells: Vec<CellResult>,
}

impl SimGridResult {
    pub fn cell(&self, input: InputKind, mechanism: MechanismKind) -> &CellResult {
        self.cells
            .iter()
            .find(|c| c.input == input && c.mechanism == mechanism)
            .expect("every grid cell is populated")
    }
}

fn cell_index(input: InputKind, mechanism: MechanismKind) -> usize {
    let i = InputKind::ALL.iter().position(|&k| k == input).unwrap();
    let j = MechanismKind::ALL
        .iter()
        .position(|&k| k == mechanism)
        .unwrap();
    i * MechanismKind::ALL.len() + j
}

/// The `(x, y)` sample of one repetition of one cell, with `x` the cause.
pub fn generate_cell_pair(
    config: &GridConfig,
    input: InputKind,
    mechanism: MechanismKind,
    rep: usize,
) -> Result<SamplePair> {
    let mut rng = substream(config.seed, stream_id(cell_index(input, mechanism), rep));
    let dist = InputDist::new(input, config.sigma);
    let x = sample_input_with(&dist, config.m, true, &mut rng)?;
    let f = Mechanism::draw(mechanism, &mut rng);
    let noise = config.noise;
    let y = x
        .iter()
        .map(|&v| f.eval(v) + noise.lambda * noise.kind.draw(&mut rng))
        .collect();
    SamplePair::new(x, y)
}

fn validate(config: &GridConfig) -> Result<()> {
    if config.m < SamplePair::MIN_LEN {
        return Err(Error::InvalidParameter(format!(
            "m must be at least 3, got {}",
            config.m
        )));
    }
    if config.repetitions == 0 {
        return Err(Error::InvalidParameter(
            "at least one repetition is required".into(),
        ));
    }
    NoiseSpec::new(config.noise.kind, config.noise.lambda)?;
    Ok(())
}

/// Runs every (input, mechanism) cell `repetitions` times and tallies the
/// decisions against the generating direction. Estimator failures count as
/// undecided.
pub fn run_grid(config: &GridConfig) -> Result<SimGridResult> {
    validate(config)?;
    let cells: Vec<(InputKind, MechanismKind)> = InputKind::ALL
        .iter()
        .flat_map(|&i| MechanismKind::ALL.iter().map(move |&f| (i, f)))
        .collect();
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..config.repetitions).map(move |r| (c, r)))
        .collect();
    let outcomes: Vec<Direction> = jobs
        .par_iter()
        .map(|&(c, rep)| {
            let (input, mechanism) = cells[c];
            let pair = generate_cell_pair(config, input, mechanism, rep)?;
            let pair = if config.swap_roles {
                pair.swapped()
            } else {
                pair
            };
            Ok(igci_score(&pair, config.reference, config.estimator)
                .map(|r| r.direction)
                .unwrap_or(Direction::Undecided))
        })
        .collect::<Result<_>>()?;
    let truth = if config.swap_roles {
        Direction::YtoX
    } else {
        Direction::XtoY
    };
    let cells = cells
        .iter()
        .zip(outcomes.chunks(config.repetitions))
        .map(|(&(input, mechanism), decisions)| {
            let mut tally = Tally::default();
            decisions.iter().for_each(|&d| tally.record(d, truth));
            CellResult {
                input,
                mechanism,
                tally,
                accuracy_pct: tally.accuracy_pct(),
            }
        })
        .collect();
    Ok(SimGridResult {
        config: config.clone(),
        cells,
    })
}
