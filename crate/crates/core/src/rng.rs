//! Seeded random streams.
//!
//! Every consumer of randomness gets its own ChaCha stream derived from the
//! run seed and a fixed stream id, so adding a consumer never shifts the
//! draws seen by another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Named substreams of a run seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    GpSampling = 1,
    EnvDraws = 2,
    BaselineRandom = 3,
    ObservationNoise = 4,
    Initial = 5,
    Beta = 6,
    Benchmark = 7,
}

/// Creates the generator for `stream` under `seed`, optionally offset by a
/// sub-index (trial number, iteration, design index, ...).
pub fn stream_rng(seed: u64, stream: Stream, sub: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, sub));
    rng.set_stream(stream as u64);
    rng
}

/// splitmix64 finaliser over the pair; keeps nearby (seed, sub) pairs apart.
pub fn mix(seed: u64, sub: u64) -> u64 {
    let mut z = seed ^ sub.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
