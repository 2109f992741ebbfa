//! The leveled edit-distance protocol.
//!
//! Level `i` cuts `x` into blocks of `b_i` bits, each level halving the
//! previous block size. Alice sends the level-1 block hashes raw, a
//! special-setting Hamming sketch of each later level's hash vector (one per
//! hash bit plane, all planes sharing one graph), and Reed-Solomon
//! redundancy over the last level's blocks.
//!
//! Bob rebuilds `x` level by level. At each level he hashes his current
//! guess, repairs the hash vector with the Hamming sketch (knowing which
//! earlier repair each block descends from), marks mismatching blocks bad,
//! matches them into `y` and copies the matched content over. The final
//! Reed-Solomon pass fixes whatever bad blocks remain.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::bits::BitString;
use crate::edit::hash::LevelHash;
use crate::edit::matching::{dp_match, MatchBlock, Matching};
use crate::error::{decode_failure, invalid, Error, FailureStage};
use crate::expcode::Adjacency;
use crate::hamming::protocol::{special_decode, special_encode, stage_graph, SpecialPlan};
use crate::hamming::sketch::{ProtocolId, SegmentTag, Sketch};
use crate::hamming::Config;
use crate::syndrome::{rs_correct_in, rs_syndrome_in, width_for_symbols, Gf, SymbolBlock};

/// Smallest block size any level may use.
pub const MIN_BLOCK_BITS: usize = 8;
/// Bob aborts a level with more than this many bad blocks per unit of `k`.
pub const BAD_BLOCK_FACTOR: usize = 6;
/// The final code corrects this many symbol errors per unit of `k`.
pub const FINAL_BUDGET_FACTOR: usize = 8;
/// Bob rejects inputs longer than this multiple of `n`.
pub const MAX_Y_FACTOR: usize = 2;

const EDIT_STAGE_BASE: u64 = 0x4544_0000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EditConfig {
    /// Hash output bits per block.
    pub hash_bits: u32,
    /// Decay exponent constant in the per-level bounds.
    pub c_prime: f64,
    pub hamming: Config,
    /// Fill unmatched bad blocks from the offsets of their neighbours
    /// instead of leaving their content as is. Bob-side only.
    pub fill_gaps: bool,
    /// Retry failed bit planes with flips confined to blocks other planes
    /// already exposed as bad. Bob-side only.
    pub joint_planes: bool,
}

impl Default for EditConfig {
    fn default() -> Self {
        EditConfig {
            hash_bits: 8,
            c_prime: 1.0,
            hamming: Config::default(),
            fill_gaps: false,
            joint_planes: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelParams {
    /// 1-based level index.
    pub level: usize,
    pub block_bits: usize,
    pub blocks: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FinalCode {
    pub w: u32,
    /// Number of `w`-bit lanes a last-level block is cut into.
    pub lanes: usize,
    /// Symbol errors corrected per lane.
    pub e: usize,
}

impl FinalCode {
    pub fn bits(&self) -> usize {
        self.lanes * 2 * self.e * self.w as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EditParams {
    pub n: usize,
    pub k: usize,
    pub hash_bits: u32,
    pub levels: Vec<LevelParams>,
    /// `specials[i - 2]` sizes the level-`i` Hamming sketch, `i >= 2`.
    pub specials: Vec<SpecialPlan>,
    pub final_code: FinalCode,
    c_prime: f64,
}

impl EditParams {
    pub fn new(n: usize, k: usize, cfg: &EditConfig) -> Result<Self, Error> {
        if k == 0 {
            return Err(invalid("edit protocol needs k >= 1"));
        }
        if n < 24 * k {
            return Err(invalid(format!("edit protocol needs n >= 24k (n = {n}, k = {k})")));
        }
        if !(1..=16).contains(&cfg.hash_bits) {
            return Err(invalid("hash width must be in 1..=16"));
        }
        let top = n / (6 * k);
        if top < MIN_BLOCK_BITS {
            return Err(Error::UnsupportedRegime(format!(
                "first-level blocks of n/(6k) = {top} bits are below {MIN_BLOCK_BITS}; \
                 this k is too large for n, use a plain randomized hashing protocol instead"
            )));
        }
        let log_nk = libm::log2(n as f64 / k as f64);
        let floor = MIN_BLOCK_BITS.max(libm::ceil(log_nk) as usize);
        let mut depth = 1;
        while (top >> depth) >= floor {
            depth += 1;
        }
        let b_last = top >> (depth - 1);
        let levels: Vec<LevelParams> = (1..=depth)
            .map(|i| {
                let block_bits = b_last << (depth - i);
                LevelParams {
                    level: i,
                    block_bits,
                    blocks: n.div_ceil(block_bits),
                }
            })
            .collect();
        let mut params = EditParams {
            n,
            k,
            hash_bits: cfg.hash_bits,
            levels,
            specials: Vec::new(),
            final_code: FinalCode { w: 0, lanes: 0, e: 0 },
            c_prime: cfg.c_prime,
        };
        for i in 2..=depth {
            let total: usize = params.bounds(i).iter().sum();
            let l = params.level(i).blocks;
            params.specials.push(SpecialPlan::new(l, total, l, None, &cfg.hamming)?);
        }
        let last = params.level(depth);
        let e = FINAL_BUDGET_FACTOR * k;
        let w = width_for_symbols(last.blocks, e).ok_or_else(|| {
            Error::UnsupportedRegime(format!(
                "{} last-level blocks plus {} redundancy symbols exceed 16-bit Reed-Solomon",
                last.blocks,
                2 * e
            ))
        })?;
        params.final_code = FinalCode {
            w,
            lanes: last.block_bits.div_ceil(w as usize),
            e,
        };
        Ok(params)
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, i: usize) -> LevelParams {
        self.levels[i - 1]
    }

    /// `k_{i'}` for `i' = 1 .. i-1`: errors attributed to blocks whose most
    /// recent repair happened at level `i'`.
    pub fn bounds(&self, i: usize) -> Vec<usize> {
        let k = self.k as f64;
        let log = libm::log2(self.n as f64 / k).max(1.0);
        let floor = libm::ceil(k / (log * log * log) - 1e-9).max(1.0) as usize;
        (1..i)
            .map(|ip| {
                let decay = libm::pow(2.0, 0.9 * self.c_prime * (i - ip) as f64);
                (libm::ceil(k / decay - 1e-9) as usize).max(floor)
            })
            .collect()
    }

    fn level_sketch_bits(&self, i: usize) -> usize {
        let sp = &self.specials[i - 2];
        self.hash_bits as usize * sp.sketch_bits()
    }

    /// Payload bits of the whole sketch.
    pub fn sketch_bits(&self) -> usize {
        self.level(1).blocks * self.hash_bits as usize
            + (2..=self.depth()).map(|i| self.level_sketch_bits(i)).sum::<usize>()
            + self.final_code.bits()
    }

    /// (first-level hashes + final redundancy, all level sketches).
    pub fn bit_breakdown(&self) -> (usize, usize) {
        let edges = self.level(1).blocks * self.hash_bits as usize + self.final_code.bits();
        let middle = (2..=self.depth()).map(|i| self.level_sketch_bits(i)).sum();
        (edges, middle)
    }
}

fn block_len(n: usize, lp: &LevelParams, j: usize) -> usize {
    lp.block_bits.min(n - j * lp.block_bits)
}

fn level_hash(seed: u64, lp: &LevelParams, hash_bits: u32) -> LevelHash {
    LevelHash::new(seed, lp.level, lp.block_bits, hash_bits)
}

fn hash_vector(x: &BitString, lp: &LevelParams, h: &LevelHash) -> Vec<u16> {
    (0..lp.blocks)
        .map(|j| h.hash(j, x, j * lp.block_bits, block_len(x.len(), lp, j)))
        .collect()
}

fn plane(v: &[u16], p: u32) -> BitString {
    let mut out = BitString::zeros(v.len());
    for (j, &h) in v.iter().enumerate() {
        if (h >> p) & 1 == 1 {
            out.set(j, true);
        }
    }
    out
}

fn pack_hashes(v: &[u16], c: u32) -> BitString {
    let mut out = BitString::zeros(v.len() * c as usize);
    for (j, &h) in v.iter().enumerate() {
        out.write_bits(j * c as usize, c as usize, h as u64);
    }
    out
}

fn unpack_hashes(bits: &BitString, count: usize, c: u32) -> Vec<u16> {
    (0..count).map(|j| bits.read_bits(j * c as usize, c as usize) as u16).collect()
}

fn lane_symbols(x: &BitString, lp: &LevelParams, fc: &FinalCode, lane: usize) -> Vec<u16> {
    let w = fc.w as usize;
    let off = lane * w;
    let take = w.min(lp.block_bits - off);
    (0..lp.blocks)
        .map(|j| x.read_bits(j * lp.block_bits + off, take) as u16)
        .collect()
}

fn level_graph(params: &EditParams, i: usize, seed: u64) -> Result<crate::expander::BipartiteGraph, Error> {
    let sp = &params.specials[i - 2];
    stage_graph(sp.n, &sp.graph, seed, EDIT_STAGE_BASE + i as u64)
}

pub fn alice_edit_sketch(x: &BitString, k: usize, shared_seed: u64, cfg: &EditConfig) -> Result<Sketch, Error> {
    let params = EditParams::new(x.len(), k, cfg)?;
    let c = params.hash_bits;
    let mut sk = Sketch::new(ProtocolId::Edit, x.len(), params.depth());
    let l1 = params.level(1);
    let v1 = hash_vector(x, &l1, &level_hash(shared_seed, &l1, c));
    sk.push(SegmentTag::HashVec, 1, pack_hashes(&v1, c));
    for i in 2..=params.depth() {
        let lp = params.level(i);
        let v = hash_vector(x, &lp, &level_hash(shared_seed, &lp, c));
        let sp = &params.specials[i - 2];
        let g = level_graph(&params, i, shared_seed)?;
        let mut parities = BitString::zeros(0);
        let mut redundancies = BitString::zeros(0);
        for p in 0..c {
            let (par, red) = special_encode(&plane(&v, p), sp, &g)?;
            parities = parities.concat(&par);
            redundancies = redundancies.concat(&red);
        }
        sk.push(SegmentTag::LevelSketch, i, parities.concat(&redundancies));
    }
    let last = params.level(params.depth());
    let fc = &params.final_code;
    let gf = Gf::new(fc.w)?;
    let mut fin = BitString::zeros(0);
    for lane in 0..fc.lanes {
        let data = SymbolBlock::new(fc.w, lane_symbols(x, &last, fc, lane))?;
        fin = fin.concat(&rs_syndrome_in(&gf, &data, fc.e)?.to_bits());
    }
    sk.push(SegmentTag::Final, params.depth(), fin);
    debug_assert_eq!(sk.payload_bits(), params.sketch_bits());
    Ok(sk)
}

/// Per-level observations of one recovery run. Ground-truth fields are
/// filled only when the caller supplies Alice's string.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LevelTrace {
    pub level: usize,
    pub blocks: usize,
    /// `|S_{i'}|` for `i' = 1 .. i-1`.
    pub subset_sizes: Vec<usize>,
    /// Bad blocks (guess differs from `x`) inside each `S_{i'}` before the
    /// level is processed.
    pub bad_by_subset: Option<Vec<usize>>,
    /// Positions where Bob's hashes differ from Alice's.
    pub hash_errors: Option<usize>,
    /// `|T_i|`.
    pub mismatches: usize,
    pub matched: usize,
    /// Consistent blocks that lost every live ancestor and became roots.
    pub orphans: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EditTrace {
    pub levels: Vec<LevelTrace>,
    /// Last-level blocks still wrong before the final correction.
    pub final_bad_blocks: Option<usize>,
    pub failure: Option<FailureStage>,
}

/// Bob's evolving view.
#[derive(Debug, Clone)]
pub struct RecoveryState {
    /// Current guess of `x`; unfilled bits are zero.
    pub guess: BitString,
    pub filled: BitString,
    /// `live[i' - 1][j']`: block `j'` of level `i'` is in `A_{i'}`.
    pub live: Vec<Vec<bool>>,
    /// `T_i` per processed level.
    pub bad: Vec<Vec<usize>>,
    /// Per-bit y-offset of the content currently in `guess`.
    offset: Vec<i32>,
}

impl RecoveryState {
    fn new(n: usize, depth: usize) -> Self {
        RecoveryState {
            guess: BitString::zeros(n),
            filled: BitString::zeros(n),
            live: vec![Vec::new(); depth],
            bad: Vec::new(),
            offset: vec![0; n],
        }
    }

    /// The subset `S_{i'}` each level-`i` block belongs to (`None` when no
    /// ancestor is live), as 1-based `i'`.
    pub fn owners(&self, params: &EditParams, i: usize) -> Vec<Option<usize>> {
        (0..params.level(i).blocks)
            .map(|j| (1..i).rev().find(|&ip| self.live[ip - 1][j >> (i - ip)]))
            .collect()
    }

    fn copy_from_y(&mut self, y: &BitString, x_start: usize, len: usize, delta: i64) {
        for p in x_start..x_start + len {
            let src = p as i64 + delta;
            let bit = src >= 0 && (src as usize) < y.len() && y.get(src as usize);
            self.guess.set(p, bit);
            self.filled.set(p, true);
            self.offset[p] = delta as i32;
        }
    }
}

fn bad_blocks(guess: &BitString, x: &BitString, lp: &LevelParams) -> Vec<bool> {
    (0..lp.blocks)
        .map(|j| {
            let s = j * lp.block_bits;
            let len = block_len(x.len(), lp, j);
            let mut d = 0;
            while d < len {
                let take = (len - d).min(64);
                if guess.read_bits(s + d, take) != x.read_bits(s + d, take) {
                    return true;
                }
                d += take;
            }
            false
        })
        .collect()
}

/// Matches `targets` into `y` and copies matched content; unmatched blocks
/// are optionally filled from neighbouring offsets.
fn match_and_refill(
    st: &mut RecoveryState,
    y: &BitString,
    lp: &LevelParams,
    targets: &[usize],
    hashes: &[u16],
    h: &LevelHash,
    k: usize,
    fill_gaps: bool,
) -> Matching {
    let n = st.guess.len();
    let blocks: Vec<MatchBlock> = targets
        .iter()
        .map(|&j| MatchBlock {
            index: j,
            pos: j * lp.block_bits,
            len: block_len(n, lp, j),
        })
        .collect();
    let m = dp_match(&blocks, y.len(), k, |slot, u| {
        let b = blocks[slot];
        h.hash(b.index, y, u, b.len) == hashes[b.index]
    });
    for &(j, u) in &m.pairs {
        let pos = j * lp.block_bits;
        st.copy_from_y(y, pos, block_len(n, lp, j), u as i64 - pos as i64);
    }
    if fill_gaps {
        let mut matched = vec![false; lp.blocks];
        for &(j, _) in &m.pairs {
            matched[j] = true;
        }
        let mut unmatched = vec![false; lp.blocks];
        for &j in targets {
            unmatched[j] = !matched[j];
        }
        let mut j = 0;
        while j < lp.blocks {
            if !unmatched[j] {
                j += 1;
                continue;
            }
            let a = j;
            while j < lp.blocks && unmatched[j] {
                j += 1;
            }
            let start = a * lp.block_bits;
            let end = (j * lp.block_bits).min(n);
            let left = if start > 0 { st.offset[start - 1] as i64 } else { 0 };
            let right = if end < n { st.offset[end] as i64 } else { left };
            let mid = start + (end - start) / 2;
            st.copy_from_y(y, start, mid - start, left);
            st.copy_from_y(y, mid, end - mid, right);
        }
    }
    m
}

/// Decodes every bit plane of a level's hash vector. With `joint`, planes
/// whose decode fails are retried with flips confined to blocks that some
/// decoded plane already showed to be bad, until no further plane succeeds.
#[allow(clippy::too_many_arguments)]
fn decode_planes(
    observed: &[u16],
    subsets: &[Vec<usize>],
    bounds: &[usize],
    sp: &SpecialPlan,
    adj: &Adjacency,
    seg: &BitString,
    c: u32,
    joint: bool,
) -> Result<Vec<BitString>, Error> {
    let m_bits = sp.graph.m;
    let r_bits = sp.rs.redundancy_bits();
    let parts = |p: u32| {
        (
            seg.slice(p as usize * m_bits, m_bits),
            seg.slice(c as usize * m_bits + p as usize * r_bits, r_bits),
        )
    };
    let mut out: Vec<Option<BitString>> = Vec::with_capacity(c as usize);
    let mut first_err = None;
    for p in 0..c {
        let (par, red) = parts(p);
        match special_decode(&plane(observed, p), subsets, bounds, sp, adj, &par, &red) {
            Ok(b) => out.push(Some(b)),
            Err(e) => {
                first_err.get_or_insert(e);
                out.push(None);
            }
        }
    }
    if joint {
        let mut known = vec![false; observed.len()];
        loop {
            for (p, b) in out.iter().enumerate() {
                if let Some(b) = b {
                    for (j, kn) in known.iter_mut().enumerate() {
                        *kn |= b.get(j) != ((observed[j] >> p) & 1 == 1);
                    }
                }
            }
            let hinted: Vec<Vec<usize>> = subsets
                .iter()
                .map(|s| s.iter().copied().filter(|&j| known[j]).collect())
                .collect();
            let mut progress = false;
            for p in 0..c {
                if out[p as usize].is_some() {
                    continue;
                }
                let (par, red) = parts(p);
                if let Ok(b) = special_decode(&plane(observed, p), &hinted, bounds, sp, adj, &par, &red) {
                    out[p as usize] = Some(b);
                    progress = true;
                }
            }
            if !progress {
                break;
            }
        }
    }
    out.into_iter()
        .map(|b| b.ok_or_else(|| first_err.clone().unwrap_or_else(|| decode_failure(FailureStage::Syndrome))))
        .collect()
}

pub fn bob_edit_recover(y: &BitString, k: usize, sketch: &Sketch, shared_seed: u64, cfg: &EditConfig) -> Result<BitString, Error> {
    bob_edit_recover_traced(y, k, sketch, shared_seed, cfg, None).0
}

/// [`bob_edit_recover`] that also reports per-level statistics; with
/// `truth` it additionally counts bad blocks against Alice's string.
pub fn bob_edit_recover_traced(
    y: &BitString,
    k: usize,
    sketch: &Sketch,
    shared_seed: u64,
    cfg: &EditConfig,
    truth: Option<&BitString>,
) -> (Result<BitString, Error>, EditTrace) {
    let mut trace = EditTrace::default();
    let result = recover(y, k, sketch, shared_seed, cfg, truth, &mut trace);
    if let Err(Error::DecodeFailure { stage }) = &result {
        trace.failure = Some(*stage);
    }
    (result, trace)
}

fn recover(
    y: &BitString,
    k: usize,
    sketch: &Sketch,
    seed: u64,
    cfg: &EditConfig,
    truth: Option<&BitString>,
    trace: &mut EditTrace,
) -> Result<BitString, Error> {
    let n = sketch.n as usize;
    if sketch.protocol != ProtocolId::Edit {
        return Err(Error::MalformedSketch("not an edit sketch".into()));
    }
    if y.len() > MAX_Y_FACTOR * n {
        return Err(invalid(format!("|y| = {} exceeds {MAX_Y_FACTOR}n", y.len())));
    }
    if let Some(x) = truth {
        if x.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: x.len(),
            });
        }
    }
    let params = EditParams::new(n, k, cfg)?;
    let depth = params.depth();
    let c = params.hash_bits;
    sketch.expect_segment_count(depth + 1)?;
    let mut st = RecoveryState::new(n, depth);

    // Level 1: hashes arrive raw, every block is a target.
    let l1 = params.level(1);
    let v1 = unpack_hashes(sketch.segment(0, SegmentTag::HashVec, l1.blocks * c as usize)?, l1.blocks, c);
    let h1 = level_hash(seed, &l1, c);
    let all: Vec<usize> = (0..l1.blocks).collect();
    let m = match_and_refill(&mut st, y, &l1, &all, &v1, &h1, k, cfg.fill_gaps);
    st.live[0] = vec![true; l1.blocks];
    st.bad.push(all.clone());
    trace.levels.push(LevelTrace {
        level: 1,
        blocks: l1.blocks,
        mismatches: l1.blocks,
        matched: m.len(),
        ..LevelTrace::default()
    });

    for i in 2..=depth {
        let lp = params.level(i);
        let h = level_hash(seed, &lp, c);
        let sp = &params.specials[i - 2];
        let bounds = params.bounds(i);
        let seg = sketch.segment(i - 1, SegmentTag::LevelSketch, params.level_sketch_bits(i))?;
        let observed = hash_vector(&st.guess, &lp, &h);

        let owners = st.owners(&params, i);
        let mut subsets: Vec<Vec<usize>> = vec![Vec::new(); i - 1];
        for (j, o) in owners.iter().enumerate() {
            let o = o.ok_or_else(|| invalid(format!("level {i} block {j} has no live ancestor")))?;
            subsets[o - 1].push(j);
        }
        let mut lt = LevelTrace {
            level: i,
            blocks: lp.blocks,
            subset_sizes: subsets.iter().map(Vec::len).collect(),
            ..LevelTrace::default()
        };
        if let Some(x) = truth {
            let bad = bad_blocks(&st.guess, x, &lp);
            lt.bad_by_subset = Some(subsets.iter().map(|s| s.iter().filter(|&&j| bad[j]).count()).collect());
            let v_true = hash_vector(x, &lp, &h);
            lt.hash_errors = Some(v_true.iter().zip(&observed).filter(|(a, b)| a != b).count());
        }

        let g = level_graph(&params, i, seed)?;
        let adj = Adjacency::new(&g);
        let planes = match decode_planes(&observed, &subsets, &bounds, sp, &adj, seg, c, cfg.joint_planes) {
            Ok(v) => v,
            Err(e) => {
                trace.levels.push(lt);
                return Err(e);
            }
        };
        let mut v = vec![0u16; lp.blocks];
        for (p, fixed) in planes.iter().enumerate() {
            for j in fixed.iter_ones() {
                v[j] |= 1 << p;
            }
        }

        let t_i: Vec<usize> = (0..lp.blocks).filter(|&j| v[j] != observed[j]).collect();
        lt.mismatches = t_i.len();
        if t_i.len() > BAD_BLOCK_FACTOR * k {
            trace.levels.push(lt);
            return Err(decode_failure(FailureStage::TooManyBadBlocks));
        }
        for &j in &t_i {
            for ip in 1..i {
                st.live[ip - 1][j >> (i - ip)] = false;
            }
        }
        let mut roots = vec![false; lp.blocks];
        for &j in &t_i {
            roots[j] = true;
        }
        for (j, r) in roots.iter_mut().enumerate() {
            if !*r && (1..i).all(|ip| !st.live[ip - 1][j >> (i - ip)]) {
                *r = true;
                lt.orphans += 1;
            }
        }
        st.live[i - 1] = roots;
        debug_assert!(i == depth || st.owners(&params, i + 1).iter().all(Option::is_some));
        let m = match_and_refill(&mut st, y, &lp, &t_i, &v, &h, k, cfg.fill_gaps);
        lt.matched = m.len();
        st.bad.push(t_i);
        trace.levels.push(lt);
    }

    // Final correction over last-level blocks, lane by lane.
    let last = params.level(depth);
    if let Some(x) = truth {
        trace.final_bad_blocks = Some(bad_blocks(&st.guess, x, &last).iter().filter(|&&b| b).count());
    }
    let fc = &params.final_code;
    let gf = Gf::new(fc.w)?;
    let fin = sketch.segment(depth, SegmentTag::Final, fc.bits())?;
    let lane_bits = 2 * fc.e * fc.w as usize;
    let mut out = st.guess.clone();
    for lane in 0..fc.lanes {
        let data = SymbolBlock::new(fc.w, lane_symbols(&st.guess, &last, fc, lane))?;
        let red = SymbolBlock::from_bits(&fin.slice(lane * lane_bits, lane_bits), fc.w)?;
        let fixed = rs_correct_in(&gf, &data, &red, fc.e)?;
        let off = lane * fc.w as usize;
        let take = (fc.w as usize).min(last.block_bits - off);
        for (j, &s) in fixed.symbols().iter().enumerate() {
            out.write_bits(j * last.block_bits + off, take, s as u64);
        }
    }
    Ok(out)
}
