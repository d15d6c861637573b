//! Counter-based random streams.
//!
//! Each `(seed, checker, index)` triple keys its own ChaCha20 stream, so the
//! draws for one instance do not depend on how many instances ran before it
//! or on which thread runs it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

fn key(seed: u64, label: &str, index: u64) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update((label.len() as u64).to_le_bytes());
    h.update(label.as_bytes());
    h.update(index.to_le_bytes());
    h.finalize().into()
}

/// Stream for draw sequence `index` of `label` under `seed`.
pub fn stream(seed: u64, label: &str, index: u64) -> ChaCha20Rng {
    ChaCha20Rng::from_seed(key(seed, label, index))
}

/// Seed of instance `index` in a suite run with `seed`.
pub fn instance_seed(seed: u64, checker: &str, index: u64) -> u64 {
    let k = key(seed, checker, index);
    u64::from_le_bytes(k[..8].try_into().expect("8 bytes"))
}

/// Log-uniform draw from `[lo, hi]`, `0 < lo < hi`.
pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}
