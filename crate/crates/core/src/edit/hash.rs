//! Keyed block hashes shared by Alice and Bob.

use core::hash::Hasher;

use siphasher::sip::SipHasher13;

use crate::bits::BitString;
use crate::seed::{self, domain};

/// The hash family of one level: `h_j` for every block index `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelHash {
    k0: u64,
    k1: u64,
    block_bits: usize,
    width: u32,
}

impl LevelHash {
    /// `width` output bits (1..=16) over payloads of `block_bits` bits.
    pub fn new(shared_seed: u64, level: usize, block_bits: usize, width: u32) -> Self {
        assert!((1..=16).contains(&width), "hash width must be in 1..=16");
        LevelHash {
            k0: seed::derive(shared_seed, &[domain::HASH, level as u64, 0]),
            k1: seed::derive(shared_seed, &[domain::HASH, level as u64, 1]),
            block_bits,
            width,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// `h_j` of `src[start .. start + len]` zero padded to the block size.
    /// Bits of `src` past its end read as zero.
    pub fn hash(&self, j: usize, src: &BitString, start: usize, len: usize) -> u16 {
        debug_assert!(len <= self.block_bits);
        let mut h = SipHasher13::new_with_keys(self.k0, self.k1);
        h.write_u64(j as u64);
        h.write_u64(self.block_bits as u64);
        let mut done = 0;
        while done < self.block_bits {
            let take = len.saturating_sub(done).min(64);
            let word = if take == 0 { 0 } else { src.read_bits(start + done, take) };
            h.write_u64(word);
            done += 64;
        }
        (h.finish() & ((1u64 << self.width) - 1)) as u16
    }
}

/// Convenience form of [`LevelHash::hash`] for a standalone payload.
pub fn hash_block(shared_seed: u64, level: usize, j: usize, payload: &BitString, width: u32) -> u16 {
    LevelHash::new(shared_seed, level, payload.len(), width).hash(j, payload, 0, payload.len())
}
