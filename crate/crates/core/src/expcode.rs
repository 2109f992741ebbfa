//! Expander-code parities and bit-flipping decoders.
//!
//! A check is the XOR of the left bits attached to it, counted with edge
//! multiplicity, so a doubled edge contributes nothing. Decoders therefore
//! work on the *effective* adjacency: the checks a vertex reaches an odd
//! number of times. A vertex flips only when more than `d/2` of its effective
//! checks are unsatisfied (`d` the nominal degree), which makes every flip
//! strictly decrease the number of unsatisfied checks.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::bits::BitString;
use crate::error::{invalid, Error};
use crate::expander::BipartiteGraph;

/// `z[i]` = XOR of `x` over the multiset `Γ^{-1}(i)`.
pub fn encode_parities(x: &BitString, g: &BipartiteGraph) -> Result<BitString, Error> {
    if x.len() != g.n_left() {
        return Err(Error::LengthMismatch {
            expected: g.n_left(),
            actual: x.len(),
        });
    }
    let mut z = BitString::zeros(g.m_right());
    for v in x.iter_ones() {
        for &e in g.neighbors(v) {
            z.flip(e as usize);
        }
    }
    Ok(z)
}

/// Odd-multiplicity adjacency in both directions, compressed rows.
#[derive(Debug, Clone)]
pub struct Adjacency {
    degree: usize,
    left_start: Vec<u32>,
    left: Vec<u32>,
    right_start: Vec<u32>,
    right: Vec<u32>,
}

impl Adjacency {
    pub fn new(g: &BipartiteGraph) -> Self {
        let n = g.n_left();
        let m = g.m_right();
        let mut left_start = Vec::with_capacity(n + 1);
        let mut left = Vec::with_capacity(n * g.degree());
        let mut row: Vec<u32> = Vec::with_capacity(g.degree());
        left_start.push(0u32);
        for v in 0..n {
            row.clear();
            row.extend_from_slice(g.neighbors(v));
            row.sort_unstable();
            let mut i = 0;
            while i < row.len() {
                let mut j = i;
                while j < row.len() && row[j] == row[i] {
                    j += 1;
                }
                if (j - i) % 2 == 1 {
                    left.push(row[i]);
                }
                i = j;
            }
            left_start.push(left.len() as u32);
        }
        let mut right_count = vec![0u32; m + 1];
        for &c in &left {
            right_count[c as usize + 1] += 1;
        }
        for i in 0..m {
            right_count[i + 1] += right_count[i];
        }
        let right_start = right_count.clone();
        let mut fill = right_count;
        let mut right = vec![0u32; left.len()];
        for v in 0..n {
            for &c in &left[left_start[v] as usize..left_start[v + 1] as usize] {
                right[fill[c as usize] as usize] = v as u32;
                fill[c as usize] += 1;
            }
        }
        Adjacency {
            degree: g.degree(),
            left_start,
            left,
            right_start,
            right,
        }
    }

    #[inline]
    pub fn checks_of(&self, v: usize) -> &[u32] {
        &self.left[self.left_start[v] as usize..self.left_start[v + 1] as usize]
    }

    #[inline]
    pub fn vertices_of(&self, c: usize) -> &[u32] {
        &self.right[self.right_start[c] as usize..self.right_start[c + 1] as usize]
    }

    pub fn n_left(&self) -> usize {
        self.left_start.len() - 1
    }

    pub fn m_right(&self) -> usize {
        self.right_start.len() - 1
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

/// Mutable decoding state: the working string, which checks are
/// unsatisfied, and per-vertex unsatisfied counts. Vertices marked
/// eligible with a count above `d/2` are kept in an ordered candidate set.
#[derive(Debug, Clone)]
pub struct ParityState<'a> {
    adj: &'a Adjacency,
    z: BitString,
    x: BitString,
    unsat: BitString,
    unsat_total: usize,
    counter: Vec<u32>,
    eligible: Vec<bool>,
    candidates: BTreeSet<u32>,
    flips: usize,
}

impl<'a> ParityState<'a> {
    /// Every vertex starts eligible.
    pub fn new(adj: &'a Adjacency, y: &BitString, z: &BitString) -> Result<Self, Error> {
        if y.len() != adj.n_left() {
            return Err(Error::LengthMismatch {
                expected: adj.n_left(),
                actual: y.len(),
            });
        }
        if z.len() != adj.m_right() {
            return Err(Error::LengthMismatch {
                expected: adj.m_right(),
                actual: z.len(),
            });
        }
        let mut unsat = z.clone();
        for v in y.iter_ones() {
            for &c in adj.checks_of(v) {
                unsat.flip(c as usize);
            }
        }
        let unsat_total = unsat.count_ones();
        let mut counter = vec![0u32; adj.n_left()];
        for c in unsat.iter_ones() {
            for &v in adj.vertices_of(c) {
                counter[v as usize] += 1;
            }
        }
        let mut st = ParityState {
            adj,
            z: z.clone(),
            x: y.clone(),
            unsat,
            unsat_total,
            counter,
            eligible: vec![true; adj.n_left()],
            candidates: BTreeSet::new(),
            flips: 0,
        };
        st.rebuild_candidates();
        Ok(st)
    }

    #[inline]
    fn over_threshold(&self, v: usize) -> bool {
        2 * self.counter[v] as usize > self.adj.degree
    }

    fn rebuild_candidates(&mut self) {
        self.candidates = (0..self.adj.n_left())
            .filter(|&v| self.eligible[v] && self.over_threshold(v))
            .map(|v| v as u32)
            .collect();
    }

    /// Restricts flipping to vertices with `mask[v]`.
    pub fn set_eligible(&mut self, mask: &[bool]) {
        assert_eq!(mask.len(), self.adj.n_left());
        self.eligible.copy_from_slice(mask);
        self.rebuild_candidates();
    }

    pub fn current(&self) -> &BitString {
        &self.x
    }

    pub fn into_current(self) -> BitString {
        self.x
    }

    pub fn flips(&self) -> usize {
        self.flips
    }

    pub fn unsatisfied(&self) -> usize {
        self.unsat_total
    }

    pub fn counter(&self, v: usize) -> u32 {
        self.counter[v]
    }

    /// Eligible vertices over threshold, ascending.
    pub fn candidates(&self) -> impl Iterator<Item = usize> + '_ {
        self.candidates.iter().map(|&v| v as usize)
    }

    pub fn first_candidate(&self) -> Option<usize> {
        self.candidates.iter().next().map(|&v| v as usize)
    }

    pub fn is_flippable(&self, v: usize) -> bool {
        self.over_threshold(v)
    }

    /// Flips the candidate `v`, asserting the unsatisfied count drops.
    pub fn flip_candidate(&mut self, v: usize) {
        let before = self.unsat_total;
        self.flip(v);
        assert!(self.unsat_total < before, "flip of {v} did not decrease unsatisfied checks");
    }

    /// Flips `v` and updates check flags, counters and candidates.
    pub fn flip(&mut self, v: usize) {
        let d = self.adj.degree;
        self.x.flip(v);
        for &c in self.adj.checks_of(v) {
            let c = c as usize;
            let now_unsat = !self.unsat.get(c);
            self.unsat.set(c, now_unsat);
            if now_unsat {
                self.unsat_total += 1;
            } else {
                self.unsat_total -= 1;
            }
            for &u in self.adj.vertices_of(c) {
                let u = u as usize;
                if now_unsat {
                    self.counter[u] += 1;
                } else {
                    self.counter[u] -= 1;
                }
                if self.eligible[u] {
                    if 2 * self.counter[u] as usize > d {
                        self.candidates.insert(u as u32);
                    } else {
                        self.candidates.remove(&(u as u32));
                    }
                }
            }
        }
        self.flips += 1;
        #[cfg(debug_assertions)]
        if self.flips % 64 == 0 {
            self.assert_consistent();
        }
    }

    /// (number of unsatisfied checks, largest vertex counter).
    pub fn unsatisfied_profile(&self) -> (usize, usize) {
        let max = self.counter.iter().copied().max().unwrap_or(0) as usize;
        (self.unsat_total, max)
    }

    /// Recomputes flags and counters from scratch and compares.
    pub fn assert_consistent(&self) {
        let fresh = ParityState::new(self.adj, &self.x, &self.z).expect("shapes fixed at construction");
        assert_eq!(fresh.unsat, self.unsat, "unsatisfied flags drifted");
        assert_eq!(fresh.counter, self.counter, "vertex counters drifted");
        assert_eq!(fresh.unsat_total, self.unsat_total);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub output: BitString,
    pub flips: usize,
    /// All checks satisfied at the end.
    pub satisfied: bool,
    /// False when the flip cap stopped decoding before a fixpoint.
    pub complete: bool,
}

/// Repeatedly flips the lowest-index allowed vertex over threshold, until
/// none remains or `max_flips` flips were made.
pub fn bp_decode_restricted(
    y: &BitString,
    z: &BitString,
    g: &BipartiteGraph,
    allowed: &[usize],
    max_flips: usize,
) -> Result<DecodeOutcome, Error> {
    let adj = Adjacency::new(g);
    bp_decode_restricted_with(&adj, y, z, allowed, max_flips)
}

/// [`bp_decode_restricted`] over a prebuilt adjacency.
pub fn bp_decode_restricted_with(
    adj: &Adjacency,
    y: &BitString,
    z: &BitString,
    allowed: &[usize],
    max_flips: usize,
) -> Result<DecodeOutcome, Error> {
    let mut mask = vec![false; adj.n_left()];
    for &v in allowed {
        if v >= mask.len() {
            return Err(Error::IndexOutOfRange {
                index: v,
                len: mask.len(),
            });
        }
        mask[v] = true;
    }
    let mut st = ParityState::new(adj, y, z)?;
    st.set_eligible(&mask);
    let mut complete = true;
    while let Some(v) = st.first_candidate() {
        if st.flips() >= max_flips {
            complete = false;
            break;
        }
        st.flip_candidate(v);
    }
    let satisfied = st.unsatisfied() == 0;
    let flips = st.flips();
    Ok(DecodeOutcome {
        output: st.into_current(),
        flips,
        satisfied,
        complete,
    })
}

/// Per-subset net-flip limits: while fewer than `19 k_i` bits of `S_i` are
/// net-flipped any vertex of `S_i` may flip; after that only already-flipped
/// ones (undoing a flip).
pub const SOFT_CAP_FACTOR: usize = 19;
/// Net flips inside `S_i` never exceed `20 k_i`.
pub const HARD_CAP_FACTOR: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetedOutcome {
    pub output: BitString,
    pub flips: usize,
    pub satisfied: bool,
    /// Net flips per subset at termination.
    pub net_flips: Vec<usize>,
}

pub fn bp_decode_budgeted(
    y: &BitString,
    z: &BitString,
    g: &BipartiteGraph,
    subsets: &[Vec<usize>],
    bounds: &[usize],
) -> Result<BudgetedOutcome, Error> {
    let adj = Adjacency::new(g);
    bp_decode_budgeted_with(&adj, y, z, subsets, bounds)
}

pub fn bp_decode_budgeted_with(
    adj: &Adjacency,
    y: &BitString,
    z: &BitString,
    subsets: &[Vec<usize>],
    bounds: &[usize],
) -> Result<BudgetedOutcome, Error> {
    if subsets.len() != bounds.len() {
        return Err(Error::LengthMismatch {
            expected: subsets.len(),
            actual: bounds.len(),
        });
    }
    const NONE: u32 = u32::MAX;
    let n = adj.n_left();
    let mut owner = vec![NONE; n];
    for (i, s) in subsets.iter().enumerate() {
        for &v in s {
            if v >= n {
                return Err(Error::IndexOutOfRange { index: v, len: n });
            }
            if owner[v] != NONE {
                return Err(invalid("budgeted decoder subsets overlap"));
            }
            owner[v] = i as u32;
        }
    }
    let mask: Vec<bool> = owner.iter().map(|&o| o != NONE).collect();
    let mut st = ParityState::new(adj, y, z)?;
    st.set_eligible(&mask);
    let cap = st.unsatisfied();
    let mut net = vec![0usize; subsets.len()];
    let mut flipped = vec![false; n];
    while st.flips() < cap {
        let pick = st.candidates().find(|&v| {
            let i = owner[v] as usize;
            flipped[v] || net[i] < SOFT_CAP_FACTOR * bounds[i]
        });
        let Some(v) = pick else { break };
        let i = owner[v] as usize;
        st.flip_candidate(v);
        flipped[v] = !flipped[v];
        if flipped[v] {
            net[i] += 1;
        } else {
            net[i] -= 1;
        }
        assert!(
            net[i] <= HARD_CAP_FACTOR * bounds[i].max(1),
            "net flips in subset {i} exceed the hard cap"
        );
    }
    let satisfied = st.unsatisfied() == 0;
    let flips = st.flips();
    Ok(BudgetedOutcome {
        output: st.into_current(),
        flips,
        satisfied,
        net_flips: net,
    })
}
