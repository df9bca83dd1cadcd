//! Seeded, splittable random streams.
//!
//! Every trajectory draws from its own ChaCha8 stream keyed by the master
//! seed and selected by the replicate index, so replicate `r` produces the
//! same numbers whether it runs first, last or on another thread.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn replicate_stream(master_seed: u64, replicate: u64) -> SimRng {
    let mut rng = seeded(master_seed);
    rng.set_stream(replicate);
    rng
}
