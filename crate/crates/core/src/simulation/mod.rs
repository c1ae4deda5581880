//! Seeded Monte-Carlo harness for synthetic cause-effect benchmarks.
//!
//! Every draw comes from a ChaCha8 stream. A run's seed selects the key and
//! each independent unit of work (grid cell and repetition, or sine
//! distribution and repetition) gets its own stream number, so results do not
//! depend on scheduling and are reproducible across platforms.

mod grid;
mod inputs;
mod mechanisms;
mod noise_bound;
mod sine;

pub use grid::{
    generate_cell_pair, run_grid, CellResult, GridConfig, NoiseKind, NoiseSpec, SimGridResult,
    Tally,
};
pub use inputs::{sample_input, sample_input_with, InputDist, InputKind, DEFAULT_WIDTH};
pub use mechanisms::{apply_mechanism, CdfMix, Mechanism, MechanismKind};
pub use noise_bound::{
    estimate_fisher_information, noise_tolerance_threshold, verify_noise_bound, BoundInput,
    FisherEstimate, NoiseBoundLevel, MIN_BOUND_SAMPLE,
};
pub use sine::{run_sine, sine_distributions, SineConfig, SineResult};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator for one unit of work.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream number for repetition `rep` of cell `cell`.
pub(crate) fn stream_id(cell: usize, rep: usize) -> u64 {
    ((cell as u64) << 32) | rep as u64
}
