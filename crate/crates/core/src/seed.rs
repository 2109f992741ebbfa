//! Seed derivation and pseudorandom streams.
//!
//! Every random object (a graph, a hash function, an adversary) is drawn from
//! its own ChaCha8 stream whose seed is derived from a master seed and a tuple
//! of domain tags. Distinct tuples give unrelated streams, so e.g. changing
//! the adversary seed can never perturb the graphs both parties rebuild.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// Domain tags used as the first element of derivation tuples.
pub mod domain {
    pub const GRAPH: u64 = 0x4752_4150_4800_0001;
    pub const HASH: u64 = 0x4841_5348_0000_0002;
    pub const DATA: u64 = 0x4441_5441_0000_0003;
    pub const SHARED: u64 = 0x5348_4152_4544_0004;
    pub const ADVERSARY: u64 = 0x4144_5645_5253_0005;
    pub const INSTANCE: u64 = 0x494e_5354_0000_0006;
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from `master` and an ordered tuple of tags.
pub fn derive(master: u64, parts: &[u64]) -> u64 {
    let mut acc = splitmix64(master ^ 0x6173_796d_6465_0001);
    for (i, &p) in parts.iter().enumerate() {
        acc = splitmix64(acc ^ splitmix64(p.wrapping_add((i as u64 + 1) << 56)));
    }
    acc
}

pub fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn derived_stream(master: u64, parts: &[u64]) -> Stream {
    stream(derive(master, parts))
}
