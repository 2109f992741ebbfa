//! Fixed-length packed bit strings.
//!
//! Bit `b` lives in byte `b / 8` at position `b % 8`, least significant bit
//! first. Internally bits are packed into little-endian `u64` words, which
//! gives exactly that byte layout when serialized.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::RngCore;

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    len: usize,
    words: Vec<u64>,
}

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        BitString {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut s = BitString {
            len,
            words: vec![u64::MAX; word_count(len)],
        };
        s.clear_tail();
        s
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut s = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                s.set(i, true);
            }
        }
        s
    }

    /// Parses a string of `0`/`1` characters, index 0 leftmost.
    pub fn from_01(text: &str) -> Result<Self, Error> {
        let mut s = Self::zeros(text.len());
        for (i, c) in text.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => s.set(i, true),
                _ => {
                    return Err(Error::InvalidParameters(alloc::format!(
                        "invalid bit character {:?} at {i}",
                        c as char
                    )))
                }
            }
        }
        Ok(s)
    }

    pub fn to_01(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }

    /// Reads `len` bits from `bytes`. The byte count must be exactly
    /// `ceil(len / 8)`; padding bits past `len` are ignored.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<Self, Error> {
        let expected = len.div_ceil(8);
        if bytes.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: bytes.len(),
            });
        }
        let mut s = Self::zeros(len);
        for (w, chunk) in s.words.iter_mut().zip(bytes.chunks(8)) {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            *w = u64::from_le_bytes(buf);
        }
        s.clear_tail();
        Ok(s)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let nbytes = self.len.div_ceil(8);
        let mut out = Vec::with_capacity(nbytes);
        for w in &self.words {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out.truncate(nbytes);
        out
    }

    pub fn random<R: RngCore + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut s = Self::zeros(len);
        for w in s.words.iter_mut() {
            *w = rng.next_u64();
        }
        s.clear_tail();
        s
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// # Panics
    /// If `index >= len`.
    #[inline]
    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        (self.words[index >> 6] >> (index & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        let mask = 1u64 << (index & 63);
        if value {
            self.words[index >> 6] |= mask;
        } else {
            self.words[index >> 6] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, index: usize) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        self.words[index >> 6] ^= 1u64 << (index & 63);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + tz)
            })
        })
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString, Error> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    pub fn xor_assign(&mut self, other: &BitString) -> Result<(), Error> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                actual: other.len,
            });
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    /// Reads up to 64 bits starting at `start`; positions at or past `len`
    /// read as zero. Bit `start + i` lands in bit `i` of the result.
    #[inline]
    pub fn read_bits(&self, start: usize, count: usize) -> u64 {
        debug_assert!(count <= 64);
        if count == 0 || start >= self.len {
            return 0;
        }
        let wi = start >> 6;
        let off = start & 63;
        let mut v = self.words[wi] >> off;
        if off != 0 && wi + 1 < self.words.len() {
            v |= self.words[wi + 1] << (64 - off);
        }
        if count < 64 {
            v &= (1u64 << count) - 1;
        }
        v
    }

    /// Writes the low `count` bits of `value` at `start..start + count`,
    /// silently dropping positions at or past `len`.
    pub fn write_bits(&mut self, start: usize, count: usize, value: u64) {
        debug_assert!(count <= 64);
        let end = (start + count).min(self.len);
        for (i, pos) in (start..end).enumerate() {
            self.set(pos, (value >> i) & 1 == 1);
        }
    }

    /// Copies `count` bits of `src` starting at `src_start` into `self` at
    /// `dst_start`. Source bits past `src.len()` read as zero; destination
    /// positions past `self.len()` are dropped.
    pub fn copy_from(&mut self, dst_start: usize, src: &BitString, src_start: usize, count: usize) {
        let mut done = 0;
        while done < count {
            let chunk = (count - done).min(64);
            let v = src.read_bits(src_start + done, chunk);
            self.write_bits(dst_start + done, chunk, v);
            done += chunk;
        }
    }

    /// Returns bits `start..start + count` as a new string (zero-filled past
    /// the end).
    pub fn slice(&self, start: usize, count: usize) -> BitString {
        let mut out = BitString::zeros(count);
        out.copy_from(0, self, start, count);
        out
    }

    /// Concatenation `self ∘ other`.
    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = BitString::zeros(self.len + other.len);
        out.copy_from(0, self, 0, self.len);
        out.copy_from(self.len, other, 0, other.len);
        out
    }

    fn clear_tail(&mut self) {
        let rem = self.len & 63;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 128 {
            write!(f, "BitString({})", self.to_01())
        } else {
            write!(f, "BitString(len={}, ones={})", self.len, self.count_ones())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn byte_order_is_lsb_first() {
        let s = BitString::from_01("1000000001").unwrap();
        assert_eq!(s.to_bytes(), [0x01, 0x02]);
        let back = BitString::from_bytes(&[0x01, 0x02], 10).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn from_bytes_masks_padding() {
        let s = BitString::from_bytes(&[0xff], 3).unwrap();
        assert_eq!(s.count_ones(), 3);
        assert_eq!(s.to_bytes(), [0x07]);
        assert!(BitString::from_bytes(&[0, 0], 3).is_err());
    }

    #[test]
    fn read_bits_crosses_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = BitString::random(300, &mut rng);
        for start in [0, 1, 60, 63, 64, 127, 250, 299] {
            for count in [1, 7, 33, 64] {
                let v = s.read_bits(start, count);
                for i in 0..count {
                    let expect = start + i < s.len() && s.get(start + i);
                    assert_eq!((v >> i) & 1 == 1, expect, "start {start} count {count} bit {i}");
                }
            }
        }
    }

    #[test]
    fn xor_requires_equal_lengths() {
        let a = BitString::zeros(5);
        let b = BitString::zeros(6);
        assert!(a.xor(&b).is_err());
    }

    #[test]
    fn iter_ones_matches_get() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = BitString::random(200, &mut rng);
        let ones: Vec<usize> = s.iter_ones().collect();
        let naive: Vec<usize> = (0..200).filter(|&i| s.get(i)).collect();
        assert_eq!(ones, naive);
    }

    #[test]
    fn slice_and_concat() {
        let a = BitString::from_01("10110").unwrap();
        let b = BitString::from_01("011").unwrap();
        let c = a.concat(&b);
        assert_eq!(c.to_01(), "10110011");
        assert_eq!(c.slice(3, 4).to_01(), "1001");
        assert_eq!(c.slice(6, 4).to_01(), "1100");
    }
}
