//! Seeded random streams.
//!
//! Every random draw in a trial comes from a ChaCha8 stream keyed by
//! `(base seed, trial index, tag)`. Output therefore depends only on that key
//! and the position in the stream, never on which worker ran the trial.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Sub-stream tags used by the solvers and harness.
pub mod tag {
    /// Hidden samples drawn by the oracle.
    pub const ORACLE: u32 = 0;
    /// Second points, directions and radial steps drawn by the solver.
    pub const AUX: u32 = 1;
    /// Random output index for the non-convex mode.
    pub const OUTPUT: u32 = 2;
    /// Number of tags reserved per algorithm.
    pub const PER_ALGORITHM: u32 = 4;
    /// Initial points shared by every algorithm in a trial.
    pub const INIT: u32 = u32::MAX;
    /// Problem construction (e.g. the random QP matrix), trial-independent.
    pub const PROBLEM: u32 = u32::MAX - 1;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamId {
    pub trial: u32,
    pub tag: u32,
}

impl StreamId {
    pub fn new(trial: u32, tag: u32) -> Self {
        Self { trial, tag }
    }

    /// Stream for sub-stream `sub` of algorithm `algorithm` in `trial`.
    pub fn algorithm(trial: u32, algorithm: u32, sub: u32) -> Self {
        Self::new(trial, algorithm * tag::PER_ALGORITHM + sub)
    }

    pub fn as_u64(self) -> u64 {
        ((self.trial as u64) << 32) | self.tag as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngContract {
    pub base_seed: u64,
}

impl RngContract {
    pub fn new(base_seed: u64) -> Self {
        Self { base_seed }
    }

    pub fn stream(&self, id: StreamId) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.base_seed);
        rng.set_stream(id.as_u64());
        rng
    }

    /// Stream positioned at word `counter`.
    pub fn stream_at(&self, id: StreamId, counter: u128) -> StreamRng {
        let mut rng = self.stream(id);
        rng.set_word_pos(counter);
        rng
    }
}

/// The streams one solver run consumes.
#[derive(Debug, Clone)]
pub struct TrialStreams {
    pub oracle: StreamRng,
    pub aux: StreamRng,
    pub output: StreamRng,
}

impl TrialStreams {
    pub fn new(contract: &RngContract, trial: u32, algorithm: u32) -> Self {
        Self {
            oracle: contract.stream(StreamId::algorithm(trial, algorithm, tag::ORACLE)),
            aux: contract.stream(StreamId::algorithm(trial, algorithm, tag::AUX)),
            output: contract.stream(StreamId::algorithm(trial, algorithm, tag::OUTPUT)),
        }
    }
}
