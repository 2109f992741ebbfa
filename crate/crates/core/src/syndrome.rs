//! Systematic Reed-Solomon codes over `GF(2^w)`, `4 <= w <= 16`.
//!
//! A codeword is `data ∥ redundancy`. `data[0]` is the highest-degree
//! coefficient of the message polynomial and the generator polynomial has
//! roots `α^0 .. α^{2e-1}`, so the code has minimum distance `2e + 1`.
//! Decoding is Berlekamp-Massey, Chien search and Forney, followed by a
//! syndrome recheck.
//!
//! Field polynomials (bit `i` = coefficient of `x^i`):
//!
//! | w | poly    | w  | poly    | w  | poly    |
//! |---|---------|----|---------|----|---------|
//! | 4 | 0x13    | 8  | 0x11D   | 12 | 0x1053  |
//! | 5 | 0x25    | 9  | 0x211   | 13 | 0x201B  |
//! | 6 | 0x43    | 10 | 0x409   | 14 | 0x4443  |
//! | 7 | 0x89    | 11 | 0x805   | 15 | 0x8003  |
//! |   |         |    |         | 16 | 0x1100B |

use alloc::vec;
use alloc::vec::Vec;

use crate::bits::BitString;
use crate::error::{decode_failure, invalid, Error, FailureStage};

pub const MIN_WIDTH: u32 = 4;
pub const MAX_WIDTH: u32 = 16;

/// Primitive polynomials indexed by `w - 4`.
pub const PRIMITIVE_POLYS: [u32; 13] = [
    0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
];

/// Log/antilog tables for `GF(2^w)`.
#[derive(Debug, Clone)]
pub struct Gf {
    w: u32,
    order: usize,
    exp: Vec<u16>,
    log: Vec<u16>,
}

impl Gf {
    pub fn new(w: u32) -> Result<Self, Error> {
        if !(MIN_WIDTH..=MAX_WIDTH).contains(&w) {
            return Err(invalid(alloc::format!("symbol width {w} outside [4, 16]")));
        }
        let poly = PRIMITIVE_POLYS[(w - MIN_WIDTH) as usize];
        let size = 1usize << w;
        let order = size - 1;
        let mut exp = vec![0u16; 2 * order];
        let mut log = vec![0u16; size];
        let mut a: u32 = 1;
        for i in 0..order {
            exp[i] = a as u16;
            log[a as usize] = i as u16;
            a <<= 1;
            if a & size as u32 != 0 {
                a ^= poly;
            }
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Gf { w, order, exp, log })
    }

    pub fn width(&self) -> u32 {
        self.w
    }

    /// Multiplicative group order `2^w - 1`.
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
    }

    /// # Panics
    /// If `b == 0`.
    #[inline]
    pub fn div(&self, a: u16, b: u16) -> u16 {
        assert!(b != 0, "division by zero in GF(2^{})", self.w);
        if a == 0 {
            return 0;
        }
        let la = self.log[a as usize] as usize;
        let lb = self.log[b as usize] as usize;
        self.exp[la + self.order - lb]
    }

    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        self.div(1, a)
    }

    /// `α^i` for any `i` (reduced mod the group order).
    #[inline]
    pub fn alpha_pow(&self, i: usize) -> u16 {
        self.exp[i % self.order]
    }

    /// Evaluates a polynomial given highest-degree coefficient first.
    pub fn eval_high_first(&self, coeffs: &[u16], x: u16) -> u16 {
        coeffs.iter().fold(0u16, |acc, &c| self.mul(acc, x) ^ c)
    }

    /// Evaluates a polynomial given lowest-degree coefficient first.
    pub fn eval_low_first(&self, coeffs: &[u16], x: u16) -> u16 {
        coeffs.iter().rev().fold(0u16, |acc, &c| self.mul(acc, x) ^ c)
    }
}

/// A run of `w`-bit symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolBlock {
    w: u32,
    symbols: Vec<u16>,
}

impl SymbolBlock {
    pub fn new(w: u32, symbols: Vec<u16>) -> Result<Self, Error> {
        if !(MIN_WIDTH..=MAX_WIDTH).contains(&w) {
            return Err(invalid(alloc::format!("symbol width {w} outside [4, 16]")));
        }
        let limit = (1u32 << w) - 1;
        if let Some(&s) = symbols.iter().find(|&&s| s as u32 > limit) {
            return Err(invalid(alloc::format!("symbol {s} does not fit in {w} bits")));
        }
        Ok(SymbolBlock { w, symbols })
    }

    pub fn width(&self) -> u32 {
        self.w
    }

    pub fn symbols(&self) -> &[u16] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Packed bit count, `len * w`.
    pub fn bit_len(&self) -> usize {
        self.symbols.len() * self.w as usize
    }

    pub fn to_bits(&self) -> BitString {
        let w = self.w as usize;
        let mut out = BitString::zeros(self.bit_len());
        for (i, &s) in self.symbols.iter().enumerate() {
            out.write_bits(i * w, w, s as u64);
        }
        out
    }

    pub fn from_bits(bits: &BitString, w: u32) -> Result<Self, Error> {
        if bits.len() % w as usize != 0 {
            return Err(invalid("packed symbol bits not a multiple of the width"));
        }
        bits_to_symbols(bits, w)
    }
}

/// Splits `x` into `ceil(len / w)` symbols, bit `j*w + i` of `x` becoming
/// bit `i` of symbol `j`; the last symbol is zero padded.
pub fn bits_to_symbols(x: &BitString, w: u32) -> Result<SymbolBlock, Error> {
    let wu = w as usize;
    let count = x.len().div_ceil(wu);
    let symbols = (0..count).map(|j| x.read_bits(j * wu, wu) as u16).collect();
    SymbolBlock::new(w, symbols)
}

/// Inverse of [`bits_to_symbols`]: the first `len` bits of the packing.
pub fn symbols_to_bits(block: &SymbolBlock, len: usize) -> BitString {
    let mut out = BitString::zeros(len);
    let w = block.w as usize;
    for (j, &s) in block.symbols.iter().enumerate() {
        out.write_bits(j * w, w, s as u64);
    }
    out
}

/// Smallest width in `[4, 16]` with `2^w - 1 >= symbols(w) + 2e`, where
/// `symbols(w) = ceil(bits / w)`. `None` if even `w = 16` is too narrow.
pub fn width_for_bits(bits: usize, e: usize) -> Option<u32> {
    (MIN_WIDTH..=MAX_WIDTH).find(|&w| bits.div_ceil(w as usize) + 2 * e < (1usize << w))
}

/// Smallest width with `2^w - 1 >= count + 2e`.
pub fn width_for_symbols(count: usize, e: usize) -> Option<u32> {
    (MIN_WIDTH..=MAX_WIDTH).find(|&w| count + 2 * e < (1usize << w))
}

/// Generator `Π_{i<2e} (x - α^i)`, highest-degree coefficient first (monic).
fn generator(gf: &Gf, e: usize) -> Vec<u16> {
    let mut g = vec![1u16];
    for i in 0..2 * e {
        let root = gf.alpha_pow(i);
        let mut next = vec![0u16; g.len() + 1];
        for (j, &c) in g.iter().enumerate() {
            next[j] ^= c;
            next[j + 1] ^= gf.mul(c, root);
        }
        g = next;
    }
    g
}

fn check_shape(gf: &Gf, data_len: usize, e: usize) -> Result<(), Error> {
    if data_len + 2 * e > gf.order() {
        return Err(invalid(alloc::format!(
            "codeword length {} exceeds {} at width {}",
            data_len + 2 * e,
            gf.order(),
            gf.width()
        )));
    }
    Ok(())
}

/// The `2e` redundancy symbols of the systematic codeword for `data`.
pub fn rs_syndrome(data: &SymbolBlock, e: usize) -> Result<SymbolBlock, Error> {
    let gf = Gf::new(data.w)?;
    rs_syndrome_in(&gf, data, e)
}

pub fn rs_syndrome_in(gf: &Gf, data: &SymbolBlock, e: usize) -> Result<SymbolBlock, Error> {
    check_shape(gf, data.len(), e)?;
    let r = 2 * e;
    if r == 0 {
        return SymbolBlock::new(data.w, Vec::new());
    }
    let g = generator(gf, e);
    // Remainder of data(x) * x^r modulo g(x), by synthetic division.
    let mut rem = vec![0u16; r];
    for &d in &data.symbols {
        let factor = d ^ rem[0];
        rem.rotate_left(1);
        rem[r - 1] = 0;
        if factor != 0 {
            for (j, slot) in rem.iter_mut().enumerate() {
                *slot ^= gf.mul(factor, g[j + 1]);
            }
        }
    }
    SymbolBlock::new(data.w, rem)
}

/// Recovers the data symbols from a possibly corrupted codeword
/// `corrupted ∥ redundancy`; succeeds whenever at most `e` symbols of the
/// whole codeword are wrong.
pub fn rs_correct(corrupted: &SymbolBlock, redundancy: &SymbolBlock, e: usize) -> Result<SymbolBlock, Error> {
    let gf = Gf::new(corrupted.w)?;
    rs_correct_in(&gf, corrupted, redundancy, e)
}

pub fn rs_correct_in(gf: &Gf, corrupted: &SymbolBlock, redundancy: &SymbolBlock, e: usize) -> Result<SymbolBlock, Error> {
    if redundancy.w != corrupted.w {
        return Err(invalid("data and redundancy widths differ"));
    }
    if redundancy.len() != 2 * e {
        return Err(Error::LengthMismatch {
            expected: 2 * e,
            actual: redundancy.len(),
        });
    }
    check_shape(gf, corrupted.len(), e)?;
    let mut word: Vec<u16> = corrupted.symbols.iter().chain(&redundancy.symbols).copied().collect();
    decode_in_place(gf, &mut word, e)?;
    word.truncate(corrupted.len());
    SymbolBlock::new(corrupted.w, word)
}

fn syndromes(gf: &Gf, word: &[u16], e: usize) -> Vec<u16> {
    (0..2 * e).map(|j| gf.eval_high_first(word, gf.alpha_pow(j))).collect()
}

/// Decodes a full codeword (highest degree first) in place.
pub fn decode_in_place(gf: &Gf, word: &mut [u16], e: usize) -> Result<usize, Error> {
    let s = syndromes(gf, word, e);
    if s.iter().all(|&v| v == 0) {
        return Ok(0);
    }
    let lambda = berlekamp_massey(gf, &s);
    let nu = lambda.len() - 1;
    if nu == 0 || nu > e {
        return Err(decode_failure(FailureStage::Syndrome));
    }
    // Ω(x) = S(x) Λ(x) mod x^{2e}, lowest degree first.
    let mut omega = vec![0u16; 2 * e];
    for (i, &l) in lambda.iter().enumerate() {
        for (j, &sv) in s.iter().enumerate() {
            if i + j < 2 * e {
                omega[i + j] ^= gf.mul(l, sv);
            }
        }
    }
    // Formal derivative: only odd-degree terms survive in characteristic 2.
    let dlambda: Vec<u16> = (1..lambda.len())
        .map(|i| if i % 2 == 1 { lambda[i] } else { 0 })
        .collect();
    let len = word.len();
    let mut found = 0;
    for p in 0..len {
        let degree = len - 1 - p;
        let x = gf.alpha_pow(degree);
        let x_inv = gf.inv(x);
        if gf.eval_low_first(&lambda, x_inv) != 0 {
            continue;
        }
        let denom = gf.eval_low_first(&dlambda, x_inv);
        if denom == 0 {
            return Err(decode_failure(FailureStage::Syndrome));
        }
        let value = gf.mul(x, gf.div(gf.eval_low_first(&omega, x_inv), denom));
        word[p] ^= value;
        found += 1;
    }
    if found != nu {
        return Err(decode_failure(FailureStage::Syndrome));
    }
    if syndromes(gf, word, e).iter().any(|&v| v != 0) {
        return Err(decode_failure(FailureStage::Syndrome));
    }
    Ok(found)
}

/// Error locator `Λ(x)`, lowest degree first, trimmed to its degree.
fn berlekamp_massey(gf: &Gf, s: &[u16]) -> Vec<u16> {
    let mut c = vec![0u16; s.len() + 1];
    let mut b = vec![0u16; s.len() + 1];
    c[0] = 1;
    b[0] = 1;
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bb = 1u16;
    for n in 0..s.len() {
        let mut d = s[n];
        for i in 1..=l {
            d ^= gf.mul(c[i], s[n - i]);
        }
        if d == 0 {
            m += 1;
        } else if 2 * l <= n {
            let t = c.clone();
            let coef = gf.div(d, bb);
            for i in 0..b.len() - m {
                c[i + m] ^= gf.mul(coef, b[i]);
            }
            l = n + 1 - l;
            b = t;
            bb = d;
            m = 1;
        } else {
            let coef = gf.div(d, bb);
            for i in 0..b.len() - m {
                c[i + m] ^= gf.mul(coef, b[i]);
            }
            m += 1;
        }
    }
    c.truncate(l + 1);
    c
}

/// Redundancy wire form: `w` (1 byte), symbol count (u32 BE), then the
/// packed symbols in bit-string order.
pub fn serialize_redundancy(block: &SymbolBlock) -> Vec<u8> {
    let mut out = Vec::with_capacity(5 + block.bit_len().div_ceil(8));
    out.push(block.w as u8);
    out.extend_from_slice(&(block.len() as u32).to_be_bytes());
    out.extend_from_slice(&block.to_bits().to_bytes());
    out
}

pub fn parse_redundancy(bytes: &[u8]) -> Result<SymbolBlock, Error> {
    if bytes.len() < 5 {
        return Err(Error::MalformedSketch("redundancy header truncated".into()));
    }
    let w = bytes[0] as u32;
    let count = u32::from_be_bytes([bytes[1], bytes[2], bytes[3], bytes[4]]) as usize;
    let bit_len = count
        .checked_mul(w as usize)
        .ok_or_else(|| Error::MalformedSketch("redundancy length overflows".into()))?;
    let bits = BitString::from_bytes(&bytes[5..], bit_len)
        .map_err(|_| Error::MalformedSketch("redundancy payload length mismatch".into()))?;
    SymbolBlock::from_bits(&bits, w).map_err(|e| Error::MalformedSketch(alloc::format!("{e}")))
}

/// How a bit string of a given length is cut into RS codewords that each
/// tolerate `e` symbol errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BitCodeLayout {
    pub bits: usize,
    pub e: usize,
    pub w: u32,
    /// Data symbols per chunk; the last chunk may be shorter.
    pub chunk_symbols: usize,
    pub chunks: usize,
}

impl BitCodeLayout {
    /// A single codeword at the smallest width when one fits; otherwise
    /// 16-bit symbols in as few chunks as needed.
    pub fn new(bits: usize, e: usize) -> Result<Self, Error> {
        if 2 * e >= (1usize << MAX_WIDTH) - 1 {
            return Err(invalid(alloc::format!("error budget {e} too large for 16-bit symbols")));
        }
        let (w, chunk_symbols) = match width_for_bits(bits, e) {
            Some(w) => (w, bits.div_ceil(w as usize).max(1)),
            None => (MAX_WIDTH, (1usize << MAX_WIDTH) - 1 - 2 * e),
        };
        let total = bits.div_ceil(w as usize);
        let chunks = if e == 0 { 0 } else { total.div_ceil(chunk_symbols) };
        Ok(BitCodeLayout {
            bits,
            e,
            w,
            chunk_symbols,
            chunks,
        })
    }

    pub fn redundancy_symbols(&self) -> usize {
        self.chunks * 2 * self.e
    }

    pub fn redundancy_bits(&self) -> usize {
        self.redundancy_symbols() * self.w as usize
    }

    fn chunk(&self, symbols: &SymbolBlock, c: usize) -> SymbolBlock {
        let lo = c * self.chunk_symbols;
        let hi = (lo + self.chunk_symbols).min(symbols.len());
        SymbolBlock {
            w: self.w,
            symbols: symbols.symbols[lo..hi].to_vec(),
        }
    }

    /// Concatenated redundancy of all chunks, as packed bits.
    pub fn protect(&self, x: &BitString) -> Result<BitString, Error> {
        if x.len() != self.bits {
            return Err(Error::LengthMismatch {
                expected: self.bits,
                actual: x.len(),
            });
        }
        let gf = Gf::new(self.w)?;
        let symbols = bits_to_symbols(x, self.w)?;
        let mut red = Vec::with_capacity(self.redundancy_symbols());
        for c in 0..self.chunks {
            red.extend(rs_syndrome_in(&gf, &self.chunk(&symbols, c), self.e)?.symbols);
        }
        Ok(SymbolBlock { w: self.w, symbols: red }.to_bits())
    }

    /// Corrects `y` given the redundancy produced by [`Self::protect`].
    pub fn recover(&self, y: &BitString, redundancy: &BitString) -> Result<BitString, Error> {
        if y.len() != self.bits {
            return Err(Error::LengthMismatch {
                expected: self.bits,
                actual: y.len(),
            });
        }
        if redundancy.len() != self.redundancy_bits() {
            return Err(Error::LengthMismatch {
                expected: self.redundancy_bits(),
                actual: redundancy.len(),
            });
        }
        if self.chunks == 0 {
            return Ok(y.clone());
        }
        let gf = Gf::new(self.w)?;
        let symbols = bits_to_symbols(y, self.w)?;
        let red = SymbolBlock::from_bits(redundancy, self.w)?;
        let mut out = Vec::with_capacity(symbols.len());
        for c in 0..self.chunks {
            let data = self.chunk(&symbols, c);
            let r = SymbolBlock {
                w: self.w,
                symbols: red.symbols[c * 2 * self.e..(c + 1) * 2 * self.e].to_vec(),
            };
            out.extend(rs_correct_in(&gf, &data, &r, self.e)?.symbols);
        }
        Ok(symbols_to_bits(&SymbolBlock { w: self.w, symbols: out }, self.bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;
    use rand::seq::index::sample;
    use rand::Rng;

    #[test]
    fn pinned_polynomials_are_primitive() {
        for w in MIN_WIDTH..=MAX_WIDTH {
            let gf = Gf::new(w).unwrap();
            let mut seen = vec![false; 1 << w];
            for i in 0..gf.order() {
                let a = gf.alpha_pow(i) as usize;
                assert!(!seen[a], "alpha repeats at w={w}");
                seen[a] = true;
            }
            assert!(!seen[0]);
        }
    }

    #[test]
    fn field_axioms_spot_check() {
        let gf = Gf::new(8).unwrap();
        let mut rng = seed::stream(1);
        for _ in 0..1000 {
            let a: u16 = rng.gen_range(1..256);
            let b: u16 = rng.gen_range(1..256);
            let c: u16 = rng.gen_range(0..256);
            assert_eq!(gf.div(gf.mul(a, b), b), a);
            assert_eq!(gf.mul(a, b ^ c), gf.mul(a, b) ^ gf.mul(a, c));
        }
    }

    /// Schoolbook long division of `data(x) x^{2e}` by the generator.
    fn reference_redundancy(gf: &Gf, data: &[u16], e: usize) -> Vec<u16> {
        let g = generator(gf, e);
        let mut buf: Vec<u16> = data.to_vec();
        buf.extend(core::iter::repeat(0).take(2 * e));
        for i in 0..data.len() {
            let coef = buf[i];
            if coef != 0 {
                for (j, &gj) in g.iter().enumerate() {
                    buf[i + j] ^= gf.mul(coef, gj);
                }
            }
        }
        buf[data.len()..].to_vec()
    }

    #[test]
    fn small_example_matches_long_division() {
        let gf = Gf::new(8).unwrap();
        let data = SymbolBlock::new(8, vec![1, 2, 3]).unwrap();
        let red = rs_syndrome(&data, 1).unwrap();
        assert_eq!(red.len(), 2);
        assert_eq!(red.symbols(), reference_redundancy(&gf, &[1, 2, 3], 1).as_slice());
        let mut word = vec![1, 2, 3];
        word.extend_from_slice(red.symbols());
        assert!(syndromes(&gf, &word, 1).iter().all(|&s| s == 0));
    }

    #[test]
    fn zero_budget_and_zero_data() {
        let data = SymbolBlock::new(5, vec![3, 9, 30]).unwrap();
        assert!(rs_syndrome(&data, 0).unwrap().is_empty());
        let zeros = SymbolBlock::new(5, vec![0; 7]).unwrap();
        assert!(rs_syndrome(&zeros, 3).unwrap().symbols().iter().all(|&s| s == 0));
    }

    #[test]
    fn length_bound_enforced() {
        let data = SymbolBlock::new(4, vec![0; 12]).unwrap();
        assert!(rs_syndrome(&data, 2).is_err());
        assert!(rs_syndrome(&data, 1).is_ok());
    }

    #[test]
    fn corrects_up_to_e_errors() {
        let mut rng = seed::stream(2);
        for trial in 0..100 {
            let w = rng.gen_range(5..=10u32);
            let e = rng.gen_range(1..=6usize);
            let len = rng.gen_range(1..=(1usize << w) - 1 - 2 * e).min(60);
            let max = (1u32 << w) as u16;
            let data: Vec<u16> = (0..len).map(|_| rng.gen_range(0..max)).collect();
            let block = SymbolBlock::new(w, data.clone()).unwrap();
            let red = rs_syndrome(&block, e).unwrap();
            let mut word: Vec<u16> = data.iter().chain(red.symbols()).copied().collect();
            for p in sample(&mut rng, word.len(), e.min(word.len())).iter() {
                word[p] ^= rng.gen_range(1..max);
            }
            let got = rs_correct(
                &SymbolBlock::new(w, word[..len].to_vec()).unwrap(),
                &SymbolBlock::new(w, word[len..].to_vec()).unwrap(),
                e,
            )
            .unwrap();
            assert_eq!(got.symbols(), data.as_slice(), "trial {trial}");
        }
    }

    #[test]
    fn symbol_packing() {
        let x = BitString::from_01("101100111").unwrap();
        let b = bits_to_symbols(&x, 8).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b.symbols()[1], 1);
        assert_eq!(symbols_to_bits(&b, 9), x);
        assert!(bits_to_symbols(&BitString::zeros(0), 4).unwrap().is_empty());
    }

    #[test]
    fn redundancy_round_trip() {
        let block = SymbolBlock::new(13, vec![1, 8191, 77, 0, 4096]).unwrap();
        let bytes = serialize_redundancy(&block);
        assert_eq!(bytes[0], 13);
        assert_eq!(&bytes[1..5], &[0, 0, 0, 5]);
        assert_eq!(bytes.len(), 5 + (5 * 13usize).div_ceil(8));
        assert_eq!(parse_redundancy(&bytes).unwrap(), block);
        assert!(parse_redundancy(&bytes[..bytes.len() - 1]).is_err());
    }

    #[test]
    fn chunked_layout_round_trip() {
        let mut rng = seed::stream(3);
        for &(bits, e) in &[(100usize, 3usize), (2_000_000, 2), (5000, 0), (131_072, 16)] {
            let layout = BitCodeLayout::new(bits, e).unwrap();
            let x = BitString::random(bits, &mut rng);
            let red = layout.protect(&x).unwrap();
            assert_eq!(red.len(), layout.redundancy_bits());
            let mut y = x.clone();
            for p in sample(&mut rng, bits, e).iter() {
                y.flip(p);
            }
            assert_eq!(layout.recover(&y, &red).unwrap(), x);
        }
        let big = BitCodeLayout::new(2_000_000, 2).unwrap();
        assert_eq!(big.w, 16);
        assert!(big.chunks > 1);
    }
}
