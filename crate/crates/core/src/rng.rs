//! Seed splitting. Every random decision of a run draws from a substream
//! keyed by (purpose, generation, index) of one master seed, so results do
//! not depend on how work is scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Stream {
    Init = 1,
    Selection = 2,
    Crossover = 3,
    Mutation = 4,
}

pub fn substream(seed: u64, stream: Stream, generation: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let key = ((stream as u64) << 56) | ((generation & 0xF_FFFF_FFFF) << 20) | (index & 0xF_FFFF);
    rng.set_stream(key);
    rng
}
