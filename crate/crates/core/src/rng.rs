//! Counter-based random streams.
//!
//! A single root seed fans out into independent substreams indexed by a
//! counter (sample number, replication number). Each substream is a ChaCha8
//! generator keyed by the seed with the counter as its stream id, so the
//! draws for sample `i` never depend on evaluation order or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedStreams {
    seed: u64,
}

impl SeedStreams {
    pub const fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub const fn seed(&self) -> u64 {
        self.seed
    }

    pub fn substream(&self, counter: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(counter);
        rng
    }

    /// A child family for a named purpose, e.g. one replication's rounds.
    pub fn child(&self, counter: u64) -> SeedStreams {
        use rand::RngCore;
        SeedStreams::new(self.substream(counter).next_u64())
    }
}

impl Default for SeedStreams {
    fn default() -> Self {
        Self::new(DEFAULT_SEED)
    }
}
