//! Deterministic RNG substream derivation.
//!
//! Every randomized estimator in this crate takes a single 64-bit master
//! seed and derives per-unit substreams (per data set, per chain, per sample
//! block, ...) through a fixed splitmix64-style mixing chain. Substreams are
//! identified by a path of integers under a domain-separation tag, so the
//! same master seed always produces the same stream for the same unit of
//! work — independently of thread scheduling or worker count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Domain tags keeping unrelated substreams apart even when their numeric
/// paths collide.
pub mod tag {
    pub const VOLUME: u64 = 0x564f_4c55_4d45; // "VOLUME"
    pub const DATASET: u64 = 0x4441_5441; // "DATA"
    pub const CHAIN: u64 = 0x0043_4841_494e; // "CHAIN"
    pub const TEST_DRAWS: u64 = 0x5445_5354; // "TEST"
    pub const FREE_ENERGY: u64 = 0x4652_4545; // "FREE"
    pub const SBIC: u64 = 0x5342_4943; // "SBIC"
    pub const INIT: u64 = 0x494e_4954; // "INIT"
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// splitmix64 finalizer; a strong 64-bit mixing function.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from `master` and a path of indices. The first path
/// element is conventionally a [`tag`] constant.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    let mut h = mix64(master ^ GOLDEN);
    for &p in path {
        h = mix64(h.wrapping_add(GOLDEN).wrapping_add(p.wrapping_mul(0x2545_f491_4f6c_dd1d)));
    }
    h
}

/// A ChaCha8 generator seeded from a derived substream seed. ChaCha8 is
/// counter-based and platform-independent, so streams are reproducible
/// across machines.
pub fn rng_from(master: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, path))
}
