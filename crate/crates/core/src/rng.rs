//! Reproducible random streams.
//!
//! Every random quantity in the crate is drawn from a ChaCha8 stream keyed by
//! a 64-bit seed and a 64-bit stream index. ChaCha is counter based, so
//! replica `k` of a cell always sees the same numbers no matter how many
//! threads run or in what order replicas are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Generator for `(seed, stream)`.
pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for child `index` of `parent`. Distinct indices give distinct seeds.
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    mix64(mix64(parent) ^ mix64(index.wrapping_mul(0xD1B5_4A32_D192_ED03).wrapping_add(1)))
}

/// A seed plus the replica streams hanging off it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedTree {
    pub seed: u64,
}

impl SeedTree {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn replica(&self, k: u64) -> Rng {
        stream(self.seed, k)
    }

    pub fn child(&self, index: u64) -> SeedTree {
        SeedTree::new(derive_seed(self.seed, index))
    }
}
