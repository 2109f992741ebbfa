//! Alice and Bob for the one-set, general, grouped and special protocols.
//!
//! Alice sees only sizes and bounds. Every graph is drawn from the shared
//! seed and a stage number, so Bob rebuilds the identical graph. A graph that
//! expands well on *every* fixed subset family of the given sizes with high
//! probability is what lets Alice build it without knowing the subsets.

use alloc::vec::Vec;

use crate::bits::BitString;
use crate::error::{decode_failure, invalid, Error, FailureStage};
use crate::expander::{plan_special, random_bipartite, BipartiteGraph, ExpanderPlan};
use crate::expcode::{bp_decode_budgeted_with, bp_decode_restricted_with, encode_parities, Adjacency};
use crate::hamming::plan::{group_by_chi, plan_general, Config, Grouping, ProtocolPlan};
use crate::hamming::sketch::{ProtocolId, SegmentTag, Sketch};
use crate::seed::{self, domain};
use crate::spec::SubsetSpec;
use crate::syndrome::BitCodeLayout;

/// Stage number of the special-setting graph.
pub const SPECIAL_STAGE: u64 = 0x5350;

pub fn stage_graph(n: usize, plan: &ExpanderPlan, shared_seed: u64, stage: u64) -> Result<BipartiteGraph, Error> {
    let mut rng = seed::derived_stream(shared_seed, &[domain::GRAPH, stage]);
    random_bipartite(n, plan.m, plan.d, &mut rng)
}

fn check_len(x: &BitString, n: usize) -> Result<(), Error> {
    if x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: x.len(),
        });
    }
    Ok(())
}

fn one_set_plan(n: usize, s: usize, k: usize, cfg: &Config) -> Result<ProtocolPlan, Error> {
    if s > n {
        return Err(invalid("subset size exceeds n"));
    }
    plan_general(n, &[s], &[k], cfg)
}

/// Parities of `x` under the stage-0 graph sized for `k` errors among `s`.
pub fn alice_one_set(x: &BitString, s: usize, k: usize, shared_seed: u64, cfg: &Config) -> Result<Sketch, Error> {
    let n = x.len();
    let plan = one_set_plan(n, s, k, cfg)?;
    let g = stage_graph(n, &plan.final_plan, shared_seed, 0)?;
    let mut sk = Sketch::new(ProtocolId::OneSet, n, 1);
    sk.push(SegmentTag::Parity, 0, encode_parities(x, &g)?);
    Ok(sk)
}

/// Bit-flipping restricted to `S`; succeeds iff every parity is satisfied.
pub fn bob_one_set(
    y: &BitString,
    subset: &[usize],
    k: usize,
    sketch: &Sketch,
    shared_seed: u64,
    cfg: &Config,
) -> Result<BitString, Error> {
    let n = y.len();
    sketch.expect_header(ProtocolId::OneSet, n)?;
    let plan = one_set_plan(n, subset.len(), k, cfg)?;
    sketch.expect_segment_count(1)?;
    let z = sketch.segment(0, SegmentTag::Parity, plan.final_plan.m)?;
    let g = stage_graph(n, &plan.final_plan, shared_seed, 0)?;
    decode_stage(y, z, &g, subset, true)
}

fn decode_stage(y: &BitString, z: &BitString, g: &BipartiteGraph, allowed: &[usize], last: bool) -> Result<BitString, Error> {
    let adj = Adjacency::new(g);
    let out = bp_decode_restricted_with(&adj, y, z, allowed, g.m_right() + 1)?;
    if !out.complete {
        return Err(decode_failure(FailureStage::FlipCap));
    }
    if last && !out.satisfied {
        return Err(decode_failure(FailureStage::ParityUnsatisfied));
    }
    Ok(out.output)
}

fn general_sketch(x: &BitString, plan: &ProtocolPlan, protocol: ProtocolId, t: usize, shared_seed: u64) -> Result<Sketch, Error> {
    let n = x.len();
    let mut sk = Sketch::new(protocol, n, t);
    for (idx, it) in plan.iterations.iter().enumerate() {
        let g = stage_graph(n, &it.plan, shared_seed, idx as u64)?;
        sk.push(SegmentTag::Parity, idx, encode_parities(x, &g)?);
    }
    let stage = plan.iterations.len();
    let g = stage_graph(n, &plan.final_plan, shared_seed, stage as u64)?;
    sk.push(SegmentTag::Parity, stage, encode_parities(x, &g)?);
    Ok(sk)
}

fn general_recover(
    y: &BitString,
    subsets: &[Vec<usize>],
    plan: &ProtocolPlan,
    sketch: &Sketch,
    shared_seed: u64,
) -> Result<BitString, Error> {
    let n = y.len();
    sketch.expect_segment_count(plan.iterations.len() + 1)?;
    let mut cur = y.clone();
    let mut allowed: Vec<usize> = Vec::new();
    let mut covered = 0;
    for (idx, it) in plan.iterations.iter().enumerate() {
        while covered < it.prefix {
            allowed.extend_from_slice(&subsets[covered]);
            covered += 1;
        }
        let z = sketch.segment(idx, SegmentTag::Parity, it.plan.m)?;
        let g = stage_graph(n, &it.plan, shared_seed, idx as u64)?;
        cur = decode_stage(&cur, z, &g, &allowed, false)?;
    }
    while covered < subsets.len() {
        allowed.extend_from_slice(&subsets[covered]);
        covered += 1;
    }
    let stage = plan.iterations.len();
    let z = sketch.segment(stage, SegmentTag::Parity, plan.final_plan.m)?;
    let g = stage_graph(n, &plan.final_plan, shared_seed, stage as u64)?;
    decode_stage(&cur, z, &g, &allowed, true)
}

/// One parity segment per planned iteration plus a final one. With a single
/// subset this is exactly [`alice_one_set`].
pub fn alice_general(
    x: &BitString,
    sizes: &[usize],
    bounds: &[usize],
    shared_seed: u64,
    cfg: &Config,
) -> Result<Sketch, Error> {
    if sizes.len() == 1 {
        return alice_one_set(x, sizes[0], bounds[0], shared_seed, cfg);
    }
    let plan = plan_general(x.len(), sizes, bounds, cfg)?;
    general_sketch(x, &plan, ProtocolId::General, sizes.len(), shared_seed)
}

pub fn bob_general(y: &BitString, spec: &SubsetSpec, sketch: &Sketch, shared_seed: u64, cfg: &Config) -> Result<BitString, Error> {
    check_len(y, spec.n())?;
    let subsets = spec.subsets().ok_or_else(|| invalid("Bob needs the subsets"))?;
    if spec.t() == 1 {
        return bob_one_set(y, &subsets[0], spec.bounds()[0], sketch, shared_seed, cfg);
    }
    sketch.expect_header(ProtocolId::General, spec.n())?;
    let plan = plan_general(spec.n(), spec.sizes(), spec.bounds(), cfg)?;
    general_recover(y, subsets, &plan, sketch, shared_seed)
}

/// The general protocol run on ratio-band groups instead of the original
/// subsets. A single group degenerates to the one-set protocol.
pub fn alice_grouped(
    x: &BitString,
    sizes: &[usize],
    bounds: &[usize],
    chi_base: u32,
    shared_seed: u64,
    cfg: &Config,
) -> Result<Sketch, Error> {
    let grouping = group_by_chi(sizes, bounds, chi_base)?;
    if grouping.len() == 1 {
        return alice_one_set(x, grouping.sizes[0], grouping.bounds[0], shared_seed, cfg);
    }
    let plan = plan_general(x.len(), &grouping.sizes, &grouping.bounds, cfg)?;
    general_sketch(x, &plan, ProtocolId::Grouped, grouping.len(), shared_seed)
}

pub fn bob_grouped(
    y: &BitString,
    spec: &SubsetSpec,
    chi_base: u32,
    sketch: &Sketch,
    shared_seed: u64,
    cfg: &Config,
) -> Result<BitString, Error> {
    check_len(y, spec.n())?;
    let subsets = spec.subsets().ok_or_else(|| invalid("Bob needs the subsets"))?;
    let grouping: Grouping = group_by_chi(spec.sizes(), spec.bounds(), chi_base)?;
    let merged = grouping.merge_subsets(subsets)?;
    if grouping.len() == 1 {
        return bob_one_set(y, &merged[0], grouping.bounds[0], sketch, shared_seed, cfg);
    }
    sketch.expect_header(ProtocolId::Grouped, spec.n())?;
    let plan = plan_general(spec.n(), &grouping.sizes, &grouping.bounds, cfg)?;
    general_recover(y, &merged, &plan, sketch, shared_seed)
}

/// Sizes of the two special-setting stages.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecialPlan {
    pub n: usize,
    /// Total error scale `K` the graph is sized for.
    pub k_total: usize,
    /// Residual bound `k'` left for the Reed-Solomon stage.
    pub k_prime: usize,
    pub graph: ExpanderPlan,
    pub rs: BitCodeLayout,
}

impl SpecialPlan {
    /// `k' = ceil(K / log2(n_hat / K))` unless overridden (log clamped to at
    /// least 1); the RS stage corrects `2k'` symbol errors.
    pub fn new(n: usize, k_total: usize, n_hat: usize, k_prime: Option<usize>, cfg: &Config) -> Result<Self, Error> {
        if k_total == 0 {
            return Err(invalid("special setting needs a positive total bound"));
        }
        let k_prime = match k_prime {
            Some(v) => v,
            None => {
                let log = libm::log2(n_hat as f64 / k_total as f64).max(1.0);
                libm::ceil(k_total as f64 / log - 1e-9).max(1.0) as usize
            }
        };
        let graph = plan_special(k_total, &cfg.tuning)?;
        let rs = BitCodeLayout::new(n, 2 * k_prime)?;
        Ok(SpecialPlan {
            n,
            k_total,
            k_prime,
            graph,
            rs,
        })
    }

    pub fn sketch_bits(&self) -> usize {
        self.graph.m + self.rs.redundancy_bits()
    }
}

/// Parities under `graph` and the RS redundancy of `x`.
pub fn special_encode(x: &BitString, plan: &SpecialPlan, graph: &BipartiteGraph) -> Result<(BitString, BitString), Error> {
    check_len(x, plan.n)?;
    Ok((encode_parities(x, graph)?, plan.rs.protect(x)?))
}

/// Stage 1 (flip-budgeted bit flipping) followed by RS correction.
pub fn special_decode(
    y: &BitString,
    subsets: &[Vec<usize>],
    bounds: &[usize],
    plan: &SpecialPlan,
    adj: &Adjacency,
    parity: &BitString,
    redundancy: &BitString,
) -> Result<BitString, Error> {
    check_len(y, plan.n)?;
    let stage1 = bp_decode_budgeted_with(adj, y, parity, subsets, bounds)?;
    plan.rs.recover(&stage1.output, redundancy)
}

pub fn special_plan_for(n: usize, sizes: &[usize], bounds: &[usize], k_prime: Option<usize>, cfg: &Config) -> Result<SpecialPlan, Error> {
    let spec = SubsetSpec::new(n, sizes.to_vec(), bounds.to_vec())?;
    spec.require_protocol_ready()?;
    SpecialPlan::new(n, spec.total_bound(), spec.total_size(), k_prime, cfg)
}

pub fn alice_special(
    x: &BitString,
    sizes: &[usize],
    bounds: &[usize],
    k_prime: Option<usize>,
    shared_seed: u64,
    cfg: &Config,
) -> Result<Sketch, Error> {
    let plan = special_plan_for(x.len(), sizes, bounds, k_prime, cfg)?;
    let g = stage_graph(x.len(), &plan.graph, shared_seed, SPECIAL_STAGE)?;
    let (parity, red) = special_encode(x, &plan, &g)?;
    let mut sk = Sketch::new(ProtocolId::Special, x.len(), sizes.len());
    sk.push(SegmentTag::Parity, 0, parity);
    sk.push(SegmentTag::Syndrome, 1, red);
    Ok(sk)
}

pub fn bob_special(
    y: &BitString,
    spec: &SubsetSpec,
    k_prime: Option<usize>,
    sketch: &Sketch,
    shared_seed: u64,
    cfg: &Config,
) -> Result<BitString, Error> {
    check_len(y, spec.n())?;
    let subsets = spec.subsets().ok_or_else(|| invalid("Bob needs the subsets"))?;
    sketch.expect_header(ProtocolId::Special, spec.n())?;
    let plan = special_plan_for(spec.n(), spec.sizes(), spec.bounds(), k_prime, cfg)?;
    sketch.expect_segment_count(2)?;
    let parity = sketch.segment(0, SegmentTag::Parity, plan.graph.m)?;
    let red = sketch.segment(1, SegmentTag::Syndrome, plan.rs.redundancy_bits())?;
    let g = stage_graph(spec.n(), &plan.graph, shared_seed, SPECIAL_STAGE)?;
    let adj = Adjacency::new(&g);
    special_decode(y, subsets, spec.bounds(), &plan, &adj, parity, red)
}
