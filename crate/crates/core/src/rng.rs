//! Seed derivation and the generator used for every path.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator behind all sampling in this crate.
pub type PathRng = ChaCha8Rng;

/// One round of the splitmix64 output function.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of sub-stream `index` of `master` (replicate, time node, ...).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

pub fn path_rng(seed: u64) -> PathRng {
    PathRng::seed_from_u64(seed)
}
