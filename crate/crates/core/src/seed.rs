//! Reproducible randomness.
//!
//! Every random stream is a `ChaCha8Rng` seeded from a 64-bit value. Child
//! seeds are derived by folding parts into a SplitMix64 state:
//!
//! ```text
//! h = splitmix64(base)
//! for p in parts: h = splitmix64(h ^ p)
//! ```
//!
//! String tags enter as their 64-bit FNV-1a hash. Both functions are fixed
//! here so any implementation can reproduce the streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type MarketRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> MarketRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(splitmix64(base), |h, &p| splitmix64(h ^ p))
}

pub fn tag(name: &str) -> u64 {
    fnv1a64(name.as_bytes())
}
