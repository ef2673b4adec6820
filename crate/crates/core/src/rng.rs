//! Seeded random streams.
//!
//! Every random graph is drawn from a ChaCha8 keystream keyed by the master
//! seed (expanded through `seed_from_u64`) with the stream index selecting
//! the ChaCha stream. Two graphs drawn with the same `(master, stream)` pair
//! are bit-identical on every platform.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

/// A `(master, stream)` pair that fully determines a random draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub master: u64,
    pub stream: u64,
}

impl Seed {
    pub const fn new(master: u64, stream: u64) -> Self {
        Seed { master, stream }
    }

    pub(crate) fn rng(self) -> CoinSource {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        CoinSource { rng }
    }
}

pub(crate) struct CoinSource {
    rng: ChaCha8Rng,
}

impl CoinSource {
    /// One 64-bit draw per call; `true` with probability `p`.
    ///
    /// The top 53 bits form a uniform value in `[0, 1)`, so `p = 0` never
    /// fires and `p = 1` always does. At `p = 1/2` this is the top bit.
    pub(crate) fn flip(&mut self, p: f64) -> bool {
        let u = (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        u < p
    }
}
