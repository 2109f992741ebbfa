//! Public, data-independent planning: iteration schedules for the general
//! protocol and ratio-band grouping.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, invalid};
use crate::expander::{plan_one_set, ExpanderPlan, PlanMode, Tuning};
use crate::spec::{chi_band, SubsetSpec};

/// Residual factor of the iterative schedule: after an iteration covering
/// `S_1..S_i` at most `C * Σ_{j>i} k_j` errors remain there.
pub const C: usize = 10;

/// Constants shared by every Hamming protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    pub tuning: Tuning,
    pub mode: PlanMode,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tuning: Tuning::default(),
            mode: PlanMode::Tuned,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Iteration {
    /// Active prefix: this iteration works on `S_1 ∪ .. ∪ S_prefix`.
    pub prefix: usize,
    /// Residual bound `k'` carried in from the previous iteration.
    pub residual: usize,
    /// Target `k''` left after this iteration.
    pub target: usize,
    /// `Σ_{j<=prefix} s_j`.
    pub set_size: usize,
    /// `k' + Σ k_j` over the newly added sets.
    pub error_scale: usize,
    pub plan: ExpanderPlan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolPlan {
    pub n: usize,
    pub iterations: Vec<Iteration>,
    pub final_set_size: usize,
    pub final_bound: usize,
    pub final_plan: ExpanderPlan,
}

impl ProtocolPlan {
    /// Total parity bits Alice sends.
    pub fn sketch_bits(&self) -> usize {
        self.iterations.iter().map(|it| it.plan.m).sum::<usize>() + self.final_plan.m
    }

    pub fn targets(&self) -> Vec<usize> {
        self.iterations.iter().map(|it| it.target).collect()
    }
}

fn one_set_plan(s: usize, k: usize, cfg: &Config) -> Result<ExpanderPlan, Error> {
    plan_one_set(s, k.min(s), cfg.mode, &cfg.tuning)
}

/// Replays the iteration rule: from `(i', k') = (0, 0)`, take the first
/// `i` in `(i', t-1]` with `k' + Σ_{i'<j<=i} k_j > C * Σ_{j>i} k_j`, plan an
/// expander for it and continue from `(i, C * Σ_{j>i} k_j)`. The final stage
/// covers every set with bound `k' + Σ_{j>i'} k_j`.
pub fn plan_general(n: usize, sizes: &[usize], bounds: &[usize], cfg: &Config) -> Result<ProtocolPlan, Error> {
    let spec = SubsetSpec::new(n, sizes.to_vec(), bounds.to_vec())?;
    spec.require_protocol_ready()?;
    let t = sizes.len();
    let mut suffix = vec![0usize; t + 1];
    for j in (0..t).rev() {
        suffix[j] = suffix[j + 1] + bounds[j];
    }
    let mut prefix_size = vec![0usize; t + 1];
    for j in 0..t {
        prefix_size[j + 1] = prefix_size[j] + sizes[j];
    }
    let mut iterations = Vec::new();
    let (mut done, mut residual) = (0usize, 0usize);
    // `done` = i' (sets consumed), indices below are 1-based prefix lengths.
    while done + 2 <= t {
        let found = (done + 1..t).find(|&i| residual + suffix[done] - suffix[i] > C * suffix[i]);
        let Some(i) = found else { break };
        let scale = residual + suffix[done] - suffix[i];
        let target = C * suffix[i];
        iterations.push(Iteration {
            prefix: i,
            residual,
            target,
            set_size: prefix_size[i],
            error_scale: scale,
            plan: one_set_plan(prefix_size[i], scale, cfg)?,
        });
        done = i;
        residual = target;
    }
    let final_bound = residual + suffix[done];
    let final_set_size = prefix_size[t];
    Ok(ProtocolPlan {
        n,
        iterations,
        final_set_size,
        final_bound,
        final_plan: one_set_plan(final_set_size, final_bound, cfg)?,
    })
}

/// Result of merging subsets whose ratios share a band.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grouping {
    pub sizes: Vec<usize>,
    pub bounds: Vec<usize>,
    /// `map[i]` is the group holding original subset `i`.
    pub map: Vec<usize>,
}

impl Grouping {
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// Merges index sets along the map; each group's indices come out sorted.
    pub fn merge_subsets(&self, subsets: &[Vec<usize>]) -> Result<Vec<Vec<usize>>, Error> {
        if subsets.len() != self.map.len() {
            return Err(Error::LengthMismatch {
                expected: self.map.len(),
                actual: subsets.len(),
            });
        }
        let mut out = vec![Vec::new(); self.len()];
        for (set, &g) in subsets.iter().zip(&self.map) {
            out[g].extend_from_slice(set);
        }
        for g in &mut out {
            g.sort_unstable();
        }
        Ok(out)
    }
}

/// Unions subsets whose ratio `s_i / k_i` lies in the same band
/// `[2^{base^{j-1}}, 2^{base^j})`, summing sizes and bounds. Groups are
/// ordered by merged bound (descending), ties by band.
pub fn group_by_chi(sizes: &[usize], bounds: &[usize], base: u32) -> Result<Grouping, Error> {
    if sizes.len() != bounds.len() {
        return Err(Error::LengthMismatch {
            expected: sizes.len(),
            actual: bounds.len(),
        });
    }
    let bands: Vec<u32> = sizes
        .iter()
        .zip(bounds)
        .map(|(&s, &k)| chi_band(s, k, base))
        .collect::<Result<_, _>>()?;
    let mut distinct = bands.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let mut groups: Vec<(usize, usize, u32)> = distinct.iter().map(|&b| (0, 0, b)).collect();
    for ((&s, &k), b) in sizes.iter().zip(bounds).zip(&bands) {
        let g = distinct.binary_search(b).expect("band present");
        groups[g].0 += s;
        groups[g].1 += k;
    }
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by(|&a, &b| groups[b].1.cmp(&groups[a].1).then(groups[a].2.cmp(&groups[b].2)));
    let mut rank = vec![0usize; groups.len()];
    for (r, &g) in order.iter().enumerate() {
        rank[g] = r;
    }
    let map = bands
        .iter()
        .map(|b| rank[distinct.binary_search(b).expect("band present")])
        .collect();
    if order.is_empty() {
        return Err(invalid("group_by_chi needs at least one subset"));
    }
    Ok(Grouping {
        sizes: order.iter().map(|&g| groups[g].0).collect(),
        bounds: order.iter().map(|&g| groups[g].1).collect(),
        map,
    })
}
