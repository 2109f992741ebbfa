//! The stochastic error-correcting code and the two-sided reduction.
//!
//! A codeword is `msg ∥ sketch ∥ redundancy`: `sketch` is the grouped
//! general-protocol sketch of `msg ∥ 0^r` (length `n`), and `redundancy`
//! protects it against `Σ k_i` symbol errors. The decoder repairs the tail
//! first, then runs Bob on `received_prefix ∥ 0^r`.

use alloc::vec;
use alloc::vec::Vec;

use crate::bits::BitString;
use crate::error::{invalid, Error};
use crate::hamming::plan::Config;
use crate::hamming::protocol::{alice_grouped, bob_grouped};
use crate::hamming::sketch::Sketch;
use crate::spec::SubsetSpec;
use crate::syndrome::BitCodeLayout;

#[derive(Debug, Clone, PartialEq)]
pub struct EccPlan {
    pub n: usize,
    pub sizes: Vec<usize>,
    pub bounds: Vec<usize>,
    pub chi_base: u32,
    /// Sketch segment lengths, in order.
    pub segment_bits: Vec<usize>,
    pub tail_code: BitCodeLayout,
}

impl EccPlan {
    pub fn new(n: usize, sizes: &[usize], bounds: &[usize], chi_base: u32, cfg: &Config) -> Result<Self, Error> {
        let spec = SubsetSpec::new(n, sizes.to_vec(), bounds.to_vec())?;
        spec.require_protocol_ready()?;
        // Segment lengths depend only on public parameters; sketch a zero
        // string to read them off.
        let template = alice_grouped(&BitString::zeros(n), sizes, bounds, chi_base, 0, cfg)?;
        let segment_bits: Vec<usize> = template.segments.iter().map(|s| s.payload.len()).collect();
        let sketch_bits = segment_bits.iter().sum();
        let tail_code = BitCodeLayout::new(sketch_bits, spec.total_bound())?;
        let plan = EccPlan {
            n,
            sizes: sizes.to_vec(),
            bounds: bounds.to_vec(),
            chi_base,
            segment_bits,
            tail_code,
        };
        if plan.redundancy_bits() >= n {
            return Err(invalid(alloc::format!(
                "redundancy {} leaves no room for a message in n = {n}",
                plan.redundancy_bits()
            )));
        }
        Ok(plan)
    }

    pub fn sketch_bits(&self) -> usize {
        self.tail_code.bits
    }

    /// `r`: sketch plus its protection.
    pub fn redundancy_bits(&self) -> usize {
        self.sketch_bits() + self.tail_code.redundancy_bits()
    }

    pub fn message_bits(&self) -> usize {
        self.n - self.redundancy_bits()
    }
}

fn sketch_to_bits(sk: &Sketch) -> BitString {
    sk.segments
        .iter()
        .fold(BitString::zeros(0), |acc, s| acc.concat(&s.payload))
}

pub fn ecc_encode(msg: &BitString, plan: &EccPlan, shared_seed: u64, cfg: &Config) -> Result<BitString, Error> {
    if msg.len() != plan.message_bits() {
        return Err(Error::LengthMismatch {
            expected: plan.message_bits(),
            actual: msg.len(),
        });
    }
    let padded = msg.concat(&BitString::zeros(plan.redundancy_bits()));
    let sk = alice_grouped(&padded, &plan.sizes, &plan.bounds, plan.chi_base, shared_seed, cfg)?;
    let sketch = sketch_to_bits(&sk);
    let protect = plan.tail_code.protect(&sketch)?;
    Ok(msg.concat(&sketch).concat(&protect))
}

/// `spec` carries the channel's subsets over all `n` codeword positions.
pub fn ecc_decode(
    received: &BitString,
    spec: &SubsetSpec,
    plan: &EccPlan,
    shared_seed: u64,
    cfg: &Config,
) -> Result<BitString, Error> {
    if received.len() != plan.n {
        return Err(Error::LengthMismatch {
            expected: plan.n,
            actual: received.len(),
        });
    }
    let mlen = plan.message_bits();
    let sbits = plan.sketch_bits();
    let sketch_rx = received.slice(mlen, sbits);
    let protect_rx = received.slice(mlen + sbits, plan.tail_code.redundancy_bits());
    let sketch = plan.tail_code.recover(&sketch_rx, &protect_rx)?;
    let mut sk = alice_grouped(&BitString::zeros(plan.n), &plan.sizes, &plan.bounds, plan.chi_base, 0, cfg)?;
    let mut pos = 0;
    for (seg, &len) in sk.segments.iter_mut().zip(&plan.segment_bits) {
        seg.payload = sketch.slice(pos, len);
        pos += len;
    }
    let y = received.slice(0, mlen).concat(&BitString::zeros(plan.redundancy_bits()));
    let x = bob_grouped(&y, spec, plan.chi_base, &sk, shared_seed, cfg)?;
    Ok(x.slice(0, mlen))
}

/// Sizes and bounds after appending Alice's side as one more subset: the
/// complement of Bob's sets with bound `k_a`, re-sorted by bound
/// (stable, the appended set after equal bounds).
pub fn two_sided_sizes(n: usize, sizes: &[usize], bounds: &[usize], k_a: usize) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>), Error> {
    let used: usize = sizes.iter().sum();
    if used > n {
        return Err(invalid("Bob's subsets exceed n"));
    }
    let mut all_sizes = sizes.to_vec();
    let mut all_bounds = bounds.to_vec();
    all_sizes.push(n - used);
    all_bounds.push(k_a);
    let mut order: Vec<usize> = (0..all_sizes.len()).collect();
    order.sort_by(|&a, &b| all_bounds[b].cmp(&all_bounds[a]));
    Ok((
        order.iter().map(|&i| all_sizes[i]).collect(),
        order.iter().map(|&i| all_bounds[i]).collect(),
        order,
    ))
}

/// One-sided spec for errors in Bob's sets plus up to `k_a` errors anywhere
/// else. `k_a = 0` returns Bob's spec unchanged.
pub fn two_sided_wrap(spec_b: &SubsetSpec, k_a: usize) -> Result<SubsetSpec, Error> {
    if k_a == 0 {
        return Ok(spec_b.clone());
    }
    let n = spec_b.n();
    let subsets = spec_b.subsets().ok_or_else(|| invalid("two-sided wrap needs Bob's subsets"))?;
    let mut in_b = vec![false; n];
    for s in subsets {
        for &v in s {
            if in_b[v] {
                return Err(invalid("Bob's subsets overlap"));
            }
            in_b[v] = true;
        }
    }
    let complement: Vec<usize> = (0..n).filter(|&v| !in_b[v]).collect();
    let (sizes, bounds, order) = two_sided_sizes(n, spec_b.sizes(), spec_b.bounds(), k_a)?;
    let mut all_sets: Vec<Vec<usize>> = subsets.to_vec();
    all_sets.push(complement);
    let sets = order.iter().map(|&i| all_sets[i].clone()).collect();
    SubsetSpec::new(n, sizes, bounds)?.with_subsets(sets)
}
