//! Named, reproducible random streams.
//!
//! Campaigns own a [`SeedTree`] holding a master seed. Every consumer of
//! randomness asks the tree for a [`StreamId`] named by a label and an
//! index path (`("noise", [trial, epoch])`, ...); the id is the SHA-256
//! of the master seed and the name and seeds a ChaCha8 generator.
//! Distinct names give independent streams, identical names give
//! identical bytes, so campaigns are bit-reproducible and epochs can be
//! synthesized concurrently without sharing generator state.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Domain-separation tag for stream derivation.
const STREAM_TAG: &[u8] = b"chipmark/stream/v1";

/// Derives per-stream seeds from one master seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedTree {
    master: [u8; 32],
}

impl SeedTree {
    /// Absorbs a master seed of any length.
    pub fn new(master_seed: &[u8]) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(STREAM_TAG);
        hasher.update((master_seed.len() as u64).to_le_bytes());
        hasher.update(master_seed);
        Self {
            master: hasher.finalize().into(),
        }
    }

    /// Stream named by a label and an index path.
    pub fn stream(&self, label: &str, path: &[u64]) -> StreamId {
        let mut hasher = Sha256::new();
        hasher.update(self.master);
        hasher.update((label.len() as u64).to_le_bytes());
        hasher.update(label.as_bytes());
        for &idx in path {
            hasher.update(idx.to_le_bytes());
        }
        StreamId(hasher.finalize().into())
    }
}

/// Seed of one independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamId([u8; 32]);

impl StreamId {
    /// Instantiates the stream's generator.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::from_seed(self.0)
    }

    /// The raw 32-byte seed, usable as keying material for deterministic
    /// derivations other than a generator.
    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }
}
