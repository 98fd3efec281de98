//! Seeds and substreams.
//!
//! Every sampler takes an [`RngSeed`] by value and builds its own generator
//! from it, so samples are pure functions of `(parameters, seed)`. Independent
//! pieces of an experiment (ensemble members, circuit layers, the unitary and
//! the Kossakowski matrix of one layer) draw from distinct substreams.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

impl RngSeed {
    pub const fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    pub const fn with_stream(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// Child seed for the `index`-th independent piece of work under `self`.
    pub fn substream(self, index: u64) -> Self {
        let mixed = splitmix64(splitmix64(self.stream) ^ index.wrapping_add(0x632b_e59b_d9b4_e019));
        Self { seed: self.seed, stream: mixed }
    }

    pub fn rng(self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_seed_same_sequence() {
        let a: Vec<u64> = (0..8).map({
            let mut r = RngSeed::new(3).substream(5).rng();
            move |_| r.random()
        }).collect();
        let b: Vec<u64> = (0..8).map({
            let mut r = RngSeed::new(3).substream(5).rng();
            move |_| r.random()
        }).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn substreams_differ() {
        let root = RngSeed::new(11);
        let x: u64 = root.substream(0).rng().random();
        let y: u64 = root.substream(1).rng().random();
        let z: u64 = root.substream(0).substream(0).rng().random();
        assert_ne!(x, y);
        assert_ne!(x, z);
    }
}
