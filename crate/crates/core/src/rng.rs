//! Seed derivation. Every random stream in a run is a ChaCha generator keyed
//! by (master seed, agent, purpose) so that streams never alias and a run is
//! reproducible from its master seed alone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Env = 1,
    Exploration = 2,
    Sampling = 3,
    Init = 4,
    Server = 5,
    Eval = 6,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, agent: usize, stream: Stream) -> u64 {
    let a = splitmix64(master);
    let b = splitmix64(a ^ (agent as u64).wrapping_mul(0x2545_f491_4f6c_dd1d));
    splitmix64(b ^ (stream as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn stream_rng(master: u64, agent: usize, stream: Stream) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, agent, stream))
}
