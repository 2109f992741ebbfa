//! Subset specifications, error patterns and the information baselines.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::bits::BitString;
use crate::error::{invalid, Error};

/// The `(S, s, k, t)` description of where errors may lie.
///
/// `sizes[i]` is `|S_i|`, `bounds[i]` the maximum number of errors inside
/// `S_i`. The index sets themselves are only present on Bob's side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSpec {
    n: usize,
    sizes: Vec<usize>,
    bounds: Vec<usize>,
    subsets: Option<Vec<Vec<usize>>>,
}

impl SubsetSpec {
    /// Builds a size-only spec. Requires `t >= 1`, `1 <= s_i <= n`,
    /// `k_i <= s_i`, `sum s_i <= n` and bounds sorted non-increasing.
    /// Zero bounds are accepted here (an adversary may place no errors);
    /// the protocols additionally demand [`SubsetSpec::require_protocol_ready`].
    pub fn new(n: usize, sizes: Vec<usize>, bounds: Vec<usize>) -> Result<Self, Error> {
        if sizes.is_empty() {
            return Err(invalid("t must be at least 1"));
        }
        if sizes.len() != bounds.len() {
            return Err(Error::LengthMismatch {
                expected: sizes.len(),
                actual: bounds.len(),
            });
        }
        for (i, (&s, &k)) in sizes.iter().zip(&bounds).enumerate() {
            if s == 0 || s > n {
                return Err(invalid(alloc::format!("size s_{i} = {s} not in [1, {n}]")));
            }
            if k > s {
                return Err(invalid(alloc::format!("bound k_{i} = {k} exceeds s_{i} = {s}")));
            }
        }
        if bounds.windows(2).any(|w| w[0] < w[1]) {
            return Err(invalid("bounds must be sorted non-increasing"));
        }
        let total: usize = sizes.iter().sum();
        if total > n {
            return Err(invalid(alloc::format!("sum of sizes {total} exceeds n = {n}")));
        }
        Ok(SubsetSpec {
            n,
            sizes,
            bounds,
            subsets: None,
        })
    }

    /// Attaches Bob's index sets; each must have the declared size, lie in
    /// `[0, n)` and be disjoint from the others.
    pub fn with_subsets(mut self, subsets: Vec<Vec<usize>>) -> Result<Self, Error> {
        if subsets.len() != self.sizes.len() {
            return Err(Error::LengthMismatch {
                expected: self.sizes.len(),
                actual: subsets.len(),
            });
        }
        let mut seen = BitString::zeros(self.n);
        for (i, set) in subsets.iter().enumerate() {
            if set.len() != self.sizes[i] {
                return Err(invalid(alloc::format!(
                    "|S_{i}| = {} but s_{i} = {}",
                    set.len(),
                    self.sizes[i]
                )));
            }
            for &p in set {
                if p >= self.n {
                    return Err(Error::IndexOutOfRange { index: p, len: self.n });
                }
                if seen.get(p) {
                    return Err(invalid(alloc::format!("position {p} appears in two subsets")));
                }
                seen.set(p, true);
            }
        }
        self.subsets = Some(subsets);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    pub fn subsets(&self) -> Option<&[Vec<usize>]> {
        self.subsets.as_deref()
    }

    pub fn without_subsets(&self) -> SubsetSpec {
        SubsetSpec {
            subsets: None,
            ..self.clone()
        }
    }

    /// `s_i >= 2 k_i` for every set, the precondition of every protocol.
    pub fn is_valid(&self) -> bool {
        self.sizes.iter().zip(&self.bounds).all(|(&s, &k)| s >= 2 * k)
    }

    pub fn require_protocol_ready(&self) -> Result<(), Error> {
        if self.bounds.iter().any(|&k| k == 0) {
            return Err(invalid("every bound k_i must be at least 1"));
        }
        if !self.is_valid() {
            return Err(invalid("protocols require s_i >= 2 k_i for every subset"));
        }
        Ok(())
    }

    pub fn total_size(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn total_bound(&self) -> usize {
        self.bounds.iter().sum()
    }

    /// Union of the index sets, sorted ascending.
    pub fn union(&self) -> Option<Vec<usize>> {
        let subsets = self.subsets.as_ref()?;
        let mut all: Vec<usize> = subsets.iter().flatten().copied().collect();
        all.sort_unstable();
        Some(all)
    }
}

/// A set of positions to invert.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ErrorPattern {
    flips: Vec<usize>,
}

impl ErrorPattern {
    pub fn new(mut flips: Vec<usize>) -> Result<Self, Error> {
        flips.sort_unstable();
        if flips.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("error pattern indices must be unique"));
        }
        Ok(ErrorPattern { flips })
    }

    pub fn flips(&self) -> &[usize] {
        &self.flips
    }

    pub fn len(&self) -> usize {
        self.flips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flips.is_empty()
    }
}

pub fn hamming_distance(x: &BitString, y: &BitString) -> Result<usize, Error> {
    Ok(x.xor(y)?.count_ones())
}

pub fn apply_errors(x: &BitString, pattern: &ErrorPattern) -> Result<BitString, Error> {
    let mut out = x.clone();
    for &p in pattern.flips() {
        if p >= x.len() {
            return Err(Error::IndexOutOfRange { index: p, len: x.len() });
        }
        out.flip(p);
    }
    Ok(out)
}

/// How sampled subsets are laid out over `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Layout {
    /// A uniformly random injective placement.
    Random,
    /// `S_1 = [0, s_1)`, `S_2 = [s_1, s_1 + s_2)`, ...
    Contiguous,
    /// Positions are dealt round-robin to the subsets that still need
    /// elements, starting at position 0.
    Interleaved,
}

impl Layout {
    pub fn as_str(self) -> &'static str {
        match self {
            Layout::Random => "random",
            Layout::Contiguous => "contiguous",
            Layout::Interleaved => "interleaved",
        }
    }

    pub fn parse(s: &str) -> Option<Layout> {
        match s {
            "random" => Some(Layout::Random),
            "contiguous" => Some(Layout::Contiguous),
            "interleaved" => Some(Layout::Interleaved),
            _ => None,
        }
    }
}

/// Realizes a size-only spec: places disjoint subsets and puts errors inside
/// them. With `uniform_counts` the number of errors in `S_i` is uniform in
/// `[0, k_i]`; otherwise it is exactly `k_i`.
pub fn sample_spec_instance<R: Rng + ?Sized>(
    spec: &SubsetSpec,
    layout: Layout,
    uniform_counts: bool,
    rng: &mut R,
) -> Result<(SubsetSpec, ErrorPattern), Error> {
    let n = spec.n();
    if spec.total_size() > n {
        return Err(invalid("subset sizes exceed n"));
    }
    let t = spec.t();
    let mut subsets: Vec<Vec<usize>> = spec.sizes().iter().map(|&s| Vec::with_capacity(s)).collect();
    match layout {
        Layout::Random => {
            let mut perm: Vec<usize> = (0..n).collect();
            let (chosen, _) = perm.partial_shuffle(rng, spec.total_size());
            let mut it = chosen.iter().copied();
            for (set, &s) in subsets.iter_mut().zip(spec.sizes()) {
                set.extend(it.by_ref().take(s));
                set.sort_unstable();
            }
        }
        Layout::Contiguous => {
            let mut start = 0;
            for (set, &s) in subsets.iter_mut().zip(spec.sizes()) {
                set.extend(start..start + s);
                start += s;
            }
        }
        Layout::Interleaved => {
            let mut pos = 0;
            let mut remaining: Vec<usize> = (0..t).collect();
            while !remaining.is_empty() {
                remaining.retain(|&i| subsets[i].len() < spec.sizes()[i]);
                for &i in &remaining {
                    subsets[i].push(pos);
                    pos += 1;
                }
            }
        }
    }

    let mut flips = Vec::with_capacity(spec.total_bound());
    for (set, &k) in subsets.iter().zip(spec.bounds()) {
        let count = if uniform_counts { rng.gen_range(0..=k) } else { k };
        flips.extend(set.choose_multiple(rng, count).copied());
    }
    let realized = spec.without_subsets().with_subsets(subsets)?;
    Ok((realized, ErrorPattern::new(flips)?))
}

/// Largest `s` for which binomial sums are computed with exact integers.
pub const EXACT_BINOMIAL_LIMIT: usize = 1 << 20;

/// `log2(sum_{j=0}^{k} C(s, j))`, the number of bits needed to name one error
/// pattern of weight at most `k` inside `s` positions.
pub fn entropy_h1(s: usize, k: usize) -> Result<f64, Error> {
    if k > s {
        return Err(invalid(alloc::format!("bound {k} exceeds size {s}")));
    }
    if s <= EXACT_BINOMIAL_LIMIT {
        Ok(log2_big(&binomial_prefix_sum(s, k)))
    } else {
        Ok(approx_log2_binomial_prefix(s, k))
    }
}

/// `sum_i log2(sum_{j <= k_i} C(s_i, j))`.
pub fn entropy_h(sizes: &[usize], bounds: &[usize]) -> Result<f64, Error> {
    if sizes.len() != bounds.len() {
        return Err(Error::LengthMismatch {
            expected: sizes.len(),
            actual: bounds.len(),
        });
    }
    sizes
        .iter()
        .zip(bounds)
        .map(|(&s, &k)| entropy_h1(s, k))
        .sum()
}

fn binomial_prefix_sum(s: usize, k: usize) -> BigUint {
    if 2 * k >= s && k < s {
        // sum_{j<=k} = 2^s - sum_{j<=s-k-1}
        let tail = binomial_prefix_sum(s, s - k - 1);
        return (BigUint::from(1u8) << s) - tail;
    }
    if k == s {
        return BigUint::from(1u8) << s;
    }
    let mut term = BigUint::from(1u8);
    let mut sum = term.clone();
    for j in 0..k {
        term = term * BigUint::from((s - j) as u64) / BigUint::from((j + 1) as u64);
        sum += &term;
    }
    sum
}

fn log2_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        let digits = v.to_u64_digits();
        let x = digits.first().copied().unwrap_or(0);
        return libm::log2(x as f64);
    }
    let shift = bits - 64;
    let top = (v >> shift).to_u64_digits()[0];
    shift as f64 + libm::log2(top as f64)
}

fn ln_binomial(s: f64, j: f64) -> f64 {
    libm::lgamma(s + 1.0) - libm::lgamma(j + 1.0) - libm::lgamma(s - j + 1.0)
}

/// Log-space binomial prefix sum via `lgamma` (Stirling series), summing from
/// the dominant term downwards until the remaining terms are negligible.
fn approx_log2_binomial_prefix(s: usize, k: usize) -> f64 {
    const LN2: f64 = core::f64::consts::LN_2;
    if 2 * k >= s {
        if k == s {
            return s as f64;
        }
        let tail = approx_log2_binomial_prefix(s, s - k - 1);
        // log2(2^s - 2^tail)
        return s as f64 + libm::log2(1.0 - libm::exp2(tail - s as f64));
    }
    let sf = s as f64;
    let top = ln_binomial(sf, k as f64);
    let mut acc = 0.0f64; // sum of exp(ln C(s,j) - top)
    let mut j = k as i64;
    while j >= 0 {
        let rel = ln_binomial(sf, j as f64) - top;
        if rel < -50.0 {
            break;
        }
        acc += libm::exp(rel);
        j -= 1;
    }
    (top + libm::log(acc)) / LN2
}

/// Band index `j >= 1` with `2^(base^(j-1)) <= s/k < 2^(base^j)`, computed
/// on exponents with exact integer comparisons.
pub fn chi_band(size: usize, bound: usize, base: u32) -> Result<u32, Error> {
    if base < 2 {
        return Err(invalid("chi base must be at least 2"));
    }
    if bound == 0 || size < 2 * bound {
        return Err(Error::RatioBelowTwo {
            size: size as u64,
            bound: bound as u64,
        });
    }
    let (s, k) = (size as u128, bound as u128);
    let mut exponent: u128 = base as u128; // base^j for j = 1
    let mut j = 1u32;
    loop {
        // s < k * 2^exponent ?
        let k_bits = 128 - k.leading_zeros() as u128;
        if exponent + k_bits > 127 || s < (k << exponent) {
            return Ok(j);
        }
        j += 1;
        exponent = exponent.saturating_mul(base as u128);
    }
}

/// Number of bands `[2^(base^(j-1)), 2^(base^j))` occupied by the ratios
/// `s_i / k_i`.
pub fn chi(sizes: &[usize], bounds: &[usize], base: u32) -> Result<usize, Error> {
    if sizes.len() != bounds.len() {
        return Err(Error::LengthMismatch {
            expected: sizes.len(),
            actual: bounds.len(),
        });
    }
    let mut bands: Vec<u32> = sizes
        .iter()
        .zip(bounds)
        .map(|(&s, &k)| chi_band(s, k, base))
        .collect::<Result<_, _>>()?;
    bands.sort_unstable();
    bands.dedup();
    Ok(bands.len())
}

/// Fraction helper used by tests and the harness: frequency of each position
/// in `S_1` over repeated sampling.
pub fn membership_counts(n: usize, sets: &[Vec<usize>]) -> Vec<usize> {
    let mut counts = vec![0usize; n];
    for set in sets {
        for &p in set {
            counts[p] += 1;
        }
    }
    counts
}
