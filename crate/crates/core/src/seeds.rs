//! Deterministic per-task seeds.
//!
//! Every independent task (one descent, one walk, one solver run) gets its
//! own generator seeded from `(base, stream, index)` through a SplitMix64
//! finalizer chain. Results therefore depend only on the base seed and the
//! task index, never on scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used throughout the crate.
pub type TaskRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for task `index` of `stream` under `base`.
pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(base) ^ stream) ^ index)
}

pub fn task_rng(base: u64, stream: u64, index: u64) -> TaskRng {
    TaskRng::seed_from_u64(derive_seed(base, stream, index))
}

/// Stable stream identifier for a label such as an instance name.
pub fn stream_id(label: &str) -> u64 {
    // FNV-1a, fixed so stream ids never change between releases.
    label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3)
    })
}
