//! Random left-regular bipartite graphs, size planning, and exhaustive
//! expansion checks.
//!
//! Edges are sampled with replacement, so a left vertex may hit the same
//! right vertex twice. Neighborhood expansion counts distinct right
//! vertices; parity computations count multiplicity, so a duplicated edge
//! cancels out of its check.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use rand::Rng;

use crate::error::{invalid, Error};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    n_left: usize,
    m_right: usize,
    degree: usize,
    /// Row-major: edges of left vertex `v` are `edges[v*d .. (v+1)*d]`.
    edges: Vec<u32>,
}

impl BipartiteGraph {
    pub fn from_edges(n_left: usize, m_right: usize, degree: usize, edges: Vec<u32>) -> Result<Self, Error> {
        if edges.len() != n_left * degree {
            return Err(Error::LengthMismatch {
                expected: n_left * degree,
                actual: edges.len(),
            });
        }
        if let Some(&bad) = edges.iter().find(|&&e| e as usize >= m_right) {
            return Err(Error::IndexOutOfRange {
                index: bad as usize,
                len: m_right,
            });
        }
        Ok(BipartiteGraph {
            n_left,
            m_right,
            degree,
            edges,
        })
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn m_right(&self) -> usize {
        self.m_right
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.edges[v * self.degree..(v + 1) * self.degree]
    }

    pub fn edges(&self) -> &[u32] {
        &self.edges
    }

    /// Number of distinct right vertices adjacent to `set`.
    pub fn neighborhood_size(&self, set: &[usize]) -> usize {
        let mut seen = vec![false; self.m_right];
        let mut count = 0;
        for &v in set {
            for &e in self.neighbors(v) {
                if !seen[e as usize] {
                    seen[e as usize] = true;
                    count += 1;
                }
            }
        }
        count
    }

    /// Debug dump: header line `n m d`, then one line per left vertex with
    /// its space-separated endpoints.
    pub fn to_dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {}", self.n_left, self.m_right, self.degree);
        for v in 0..self.n_left {
            let row = self.neighbors(v);
            for (i, e) in row.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{e}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_dump(text: &str) -> Result<Self, Error> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| invalid("empty graph dump"))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| invalid("bad graph dump header")))
            .collect::<Result<_, _>>()?;
        let [n, m, d] = nums[..] else {
            return Err(invalid("graph dump header must be `n m d`"));
        };
        let mut edges = Vec::with_capacity(n * d);
        for _ in 0..n {
            let line = lines.next().ok_or_else(|| invalid("graph dump truncated"))?;
            let before = edges.len();
            for tok in line.split_whitespace() {
                edges.push(tok.parse::<u32>().map_err(|_| invalid("bad graph dump endpoint"))?);
            }
            if edges.len() - before != d {
                return Err(invalid("graph dump row has wrong degree"));
            }
        }
        Self::from_edges(n, m, d, edges)
    }
}

/// Draws every one of the `n * d` endpoints independently and uniformly from
/// `[0, m)`, left vertex 0's edges first.
pub fn random_bipartite<R: Rng + ?Sized>(n: usize, m: usize, d: usize, rng: &mut R) -> Result<BipartiteGraph, Error> {
    if n == 0 || m == 0 || d == 0 {
        return Err(invalid("random_bipartite needs n, m, d >= 1"));
    }
    if m > u32::MAX as usize {
        return Err(invalid("m must fit in u32"));
    }
    let m32 = m as u32;
    let edges = (0..n * d).map(|_| rng.gen_range(0..m32)).collect();
    Ok(BipartiteGraph {
        n_left: n,
        m_right: m,
        degree: d,
        edges,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanMode {
    /// Small empirically validated constants.
    Tuned,
    /// The sufficient sizes from the probabilistic argument, verbatim.
    Conservative,
}

/// Constants for tuned plans.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tuning {
    /// Degree factor: `d = max(4, ceil(c_d * log2(2s/k)))`.
    pub c_d: f64,
    /// Check factor for one-set plans: `m = ceil(c_m * d * k)`.
    pub c_m: f64,
    /// Check factor for special-setting plans: `m = ceil(c_s * d * k)`.
    pub c_s: f64,
    /// Expansion slack `delta` used by conservative plans.
    pub delta: f64,
}

impl Default for Tuning {
    fn default() -> Self {
        Tuning {
            c_d: 2.0,
            c_m: 4.0,
            c_s: 6.0,
            delta: 0.1,
        }
    }
}

/// Minimum degree of tuned one-set plans.
pub const MIN_TUNED_DEGREE: usize = 4;
/// Left degree of special-setting graphs.
pub const SPECIAL_DEGREE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpanderPlan {
    pub d: usize,
    pub m: usize,
    pub delta: f64,
    pub mode: PlanMode,
}

fn ceil_usize(x: f64) -> usize {
    let c = libm::ceil(x - 1e-9);
    if c <= 0.0 {
        0
    } else {
        c as usize
    }
}

/// Graph size for the single-set protocol with `k` errors among `s` positions.
pub fn plan_one_set(s: usize, k: usize, mode: PlanMode, tuning: &Tuning) -> Result<ExpanderPlan, Error> {
    if k == 0 || k > s {
        return Err(invalid(alloc::format!("plan_one_set needs 1 <= k <= s (s={s}, k={k})")));
    }
    let log_ratio = libm::log2(2.0 * s as f64 / k as f64);
    match mode {
        PlanMode::Tuned => {
            let d = ceil_usize(tuning.c_d * log_ratio).max(MIN_TUNED_DEGREE);
            let m = ceil_usize(tuning.c_m * (d * k) as f64).max(d);
            Ok(ExpanderPlan {
                d,
                m,
                delta: tuning.delta,
                mode,
            })
        }
        PlanMode::Conservative => {
            let delta = tuning.delta;
            if !(delta > 0.0 && delta < 1.0) {
                return Err(invalid("delta must lie in (0, 1)"));
            }
            let inv = ceil_usize(1.0 / delta);
            let d = inv.max(ceil_usize(log_ratio));
            let m = 2usize
                .checked_mul(d)
                .and_then(|v| v.checked_mul(k))
                .and_then(|v| v.checked_mul(1usize.checked_shl(inv as u32)?))
                .ok_or_else(|| invalid("conservative plan overflows"))?;
            Ok(ExpanderPlan { d, m, delta, mode })
        }
    }
}

/// Graph size for the special-setting protocol: constant degree, checks
/// linear in `k`. `delta` is carried along but does not affect tuned sizes.
pub fn plan_special(k: usize, tuning: &Tuning) -> Result<ExpanderPlan, Error> {
    if k == 0 {
        return Err(invalid("plan_special needs k >= 1"));
    }
    let d = SPECIAL_DEGREE;
    let m = ceil_usize(tuning.c_s * (d * k) as f64).max(d);
    Ok(ExpanderPlan {
        d,
        m,
        delta: tuning.delta,
        mode: PlanMode::Tuned,
    })
}

/// Largest number of subsets an exhaustive check may visit.
pub const ENUMERATION_BUDGET: u128 = 10_000_000;

fn binom_u128(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// True iff every `R ⊆ set` with `r_lo <= |R| <= r_hi` has more than
/// `alpha * |R|` distinct neighbors.
pub fn verify_expansion_exact(
    g: &BipartiteGraph,
    set: &[usize],
    r_lo: usize,
    r_hi: usize,
    alpha: f64,
) -> Result<bool, Error> {
    let caps = [usize::MAX];
    let owner = vec![0usize; set.len()];
    check_budget(set.len(), r_hi)?;
    Ok(Enumerator::new(g, set, &owner, &caps, r_lo, r_hi, alpha).run())
}

/// Like [`verify_expansion_exact`], restricted to `R ⊆ ∪ S_i` with
/// `|R ∩ S_i| <= caps[i]` for every `i`.
pub fn verify_expansion_restricted(
    g: &BipartiteGraph,
    subsets: &[Vec<usize>],
    caps: &[usize],
    r_lo: usize,
    r_hi: usize,
    alpha: f64,
) -> Result<bool, Error> {
    if subsets.len() != caps.len() {
        return Err(Error::LengthMismatch {
            expected: subsets.len(),
            actual: caps.len(),
        });
    }
    let mut pairs: Vec<(usize, usize)> = subsets
        .iter()
        .enumerate()
        .flat_map(|(i, s)| s.iter().map(move |&v| (v, i)))
        .collect();
    pairs.sort_unstable();
    let set: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let owner: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    check_budget(set.len(), r_hi)?;
    Ok(Enumerator::new(g, &set, &owner, caps, r_lo, r_hi, alpha).run())
}

fn check_budget(universe: usize, r_hi: usize) -> Result<(), Error> {
    let count = binom_u128(universe, r_hi.min(universe));
    if count > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            count,
            budget: ENUMERATION_BUDGET,
        });
    }
    Ok(())
}

/// Depth-first enumeration of subsets in lexicographic order, maintaining
/// right-vertex hit counts incrementally.
struct Enumerator<'a> {
    g: &'a BipartiteGraph,
    set: &'a [usize],
    owner: &'a [usize],
    caps: &'a [usize],
    used: Vec<usize>,
    hits: Vec<u32>,
    distinct: usize,
    r_lo: usize,
    r_hi: usize,
    alpha: f64,
}

impl<'a> Enumerator<'a> {
    fn new(
        g: &'a BipartiteGraph,
        set: &'a [usize],
        owner: &'a [usize],
        caps: &'a [usize],
        r_lo: usize,
        r_hi: usize,
        alpha: f64,
    ) -> Self {
        Enumerator {
            g,
            set,
            owner,
            caps,
            used: vec![0; caps.len()],
            hits: vec![0; g.m_right()],
            distinct: 0,
            r_lo,
            r_hi,
            alpha,
        }
    }

    fn run(&mut self) -> bool {
        self.descend(0, 0)
    }

    fn descend(&mut self, start: usize, size: usize) -> bool {
        if size >= self.r_hi.max(1) && size > 0 {
            return true;
        }
        for idx in start..self.set.len() {
            let grp = self.owner[idx];
            if self.used[grp] >= self.caps[grp] {
                continue;
            }
            let v = self.set[idx];
            self.used[grp] += 1;
            for &e in self.g.neighbors(v) {
                let h = &mut self.hits[e as usize];
                if *h == 0 {
                    self.distinct += 1;
                }
                *h += 1;
            }
            let r = size + 1;
            let mut ok = true;
            if r >= self.r_lo && (self.distinct as f64) <= self.alpha * r as f64 {
                ok = false;
            }
            if ok && r < self.r_hi {
                ok = self.descend(idx + 1, r);
            }
            for &e in self.g.neighbors(v) {
                let h = &mut self.hits[e as usize];
                *h -= 1;
                if *h == 0 {
                    self.distinct -= 1;
                }
            }
            self.used[grp] -= 1;
            if !ok {
                return false;
            }
        }
        true
    }
}
