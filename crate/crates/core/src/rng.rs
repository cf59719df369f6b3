//! Seeded randomness, split per consumer by stable string labels.
//!
//! Every random draw in a run comes from a [`RunRng`] built from the run
//! seed. Sub-streams are keyed by label, so adding an actor to a scenario
//! does not perturb the streams of the actors that were already there.

use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use sha2::{Digest, Sha256};

/// Root of all randomness for one run.
#[derive(Debug, Clone)]
pub struct RunRng {
    seed: u64,
}

impl RunRng {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent stream for `label`. Equal labels yield equal streams.
    pub fn stream(&self, label: &str) -> ChaCha8Rng {
        let mut hasher = Sha256::new();
        hasher.update(b"ghostpos.rng.v1");
        hasher.update(self.seed.to_be_bytes());
        hasher.update((label.len() as u64).to_be_bytes());
        hasher.update(label.as_bytes());
        let digest = hasher.finalize();
        let mut key = [0u8; 32];
        key.copy_from_slice(&digest);
        ChaCha8Rng::from_seed(key)
    }
}

/// `len` random bytes from `rng`.
pub fn random_bytes(rng: &mut impl RngCore, len: usize) -> Vec<u8> {
    let mut out = alloc::vec![0u8; len];
    rng.fill_bytes(&mut out);
    out
}

/// Uniform draw from `[0, bound)` by rejection sampling.
pub fn gen_range(rng: &mut impl RngCore, bound: u64) -> u64 {
    assert!(bound > 0, "gen_range bound must be positive");
    let zone = u64::MAX - (u64::MAX % bound);
    loop {
        let v = rng.next_u64();
        if v < zone {
            return v % bound;
        }
    }
}

/// Stable label `prefix:id`, used for per-actor streams.
pub fn label(prefix: &str, id: &str) -> String {
    let mut s = String::with_capacity(prefix.len() + id.len() + 1);
    s.push_str(prefix);
    s.push(':');
    s.push_str(id);
    s
}
