//! Partitioned random streams.
//!
//! Every run owns three independent generators: one for trial randomness
//! (parent indices, forced crossover index, crossover mask), one for
//! control-parameter sampling, and one for population initialization.
//! Keeping them apart is what makes oracle candidates comparable: however
//! many `{F, CR}` pairs the oracle draws, the trial-randomness sequence
//! never moves.
//!
//! ChaCha8 is used throughout: counter-based, portable, and fully
//! determined by a 64-bit seed. The choice is recorded in run metadata.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator identifier written into output metadata.
pub const RNG_NAME: &str = "chacha8";

/// Concrete stream type used by every component.
pub type Stream = ChaCha8Rng;

const STREAM_SHARED: u64 = 0;
const STREAM_PARAM: u64 = 1;
const STREAM_INIT: u64 = 2;

/// The three per-run generator states.
#[derive(Clone, Debug)]
pub struct RngStreams {
    /// Trial randomness: parent indices, j_rand, crossover mask uniforms.
    pub shared: Stream,
    /// `{F, CR}` sampling, for both adaptation methods and the oracle.
    pub param: Stream,
    /// Population initialization.
    pub init: Stream,
}

impl RngStreams {
    /// Streams for run `run_index` of an experiment with `master_seed`.
    pub fn for_run(master_seed: u64, run_index: u64) -> Self {
        let run_seed = derive_seed(master_seed, run_index, 0);
        Self::from_run_seed(run_seed)
    }

    /// Streams from an already-derived per-run seed.
    pub fn from_run_seed(run_seed: u64) -> Self {
        RngStreams {
            shared: Stream::seed_from_u64(derive_seed(run_seed, STREAM_SHARED, 1)),
            param: Stream::seed_from_u64(derive_seed(run_seed, STREAM_PARAM, 1)),
            init: Stream::seed_from_u64(derive_seed(run_seed, STREAM_INIT, 1)),
        }
    }
}

/// SplitMix64 finalizer; decorrelates consecutive seeds.
fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Derive an independent 64-bit seed from a master seed and two salts.
pub fn derive_seed(master: u64, salt_a: u64, salt_b: u64) -> u64 {
    mix64(master ^ mix64(salt_a.wrapping_add(0x9E37_79B9_7F4A_7C15)) ^ mix64(salt_b.wrapping_mul(0xD1B5_4A32_D192_ED03)))
}
