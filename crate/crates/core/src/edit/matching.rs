//! Maximum monotone matching of x-blocks into y under a shift budget.
//!
//! A match places block `j` (x-position `pos_j`) at y-position `u_j`; its
//! offset is `δ_j = u_j - pos_j`. A matching is monotone when block indices
//! and y-positions both increase, and its shift cost is
//! `|δ_1| + Σ |δ_t - δ_{t-1}|`. Any offset of a matching with cost at most
//! `k` lies in `[-k, k]`, so only `2k + 1` candidate starts per block exist.

use alloc::vec;
use alloc::vec::Vec;

/// One block to be matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchBlock {
    /// Block index in its level.
    pub index: usize,
    /// Start in x.
    pub pos: usize,
    /// True length (the last block of a level may be short).
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    /// `(block index, y start)`, both strictly increasing.
    pub pairs: Vec<(usize, usize)>,
    pub cost: usize,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Shift cost of matched `(x position, y position)` pairs.
pub fn shift_cost(pairs: &[(usize, usize)]) -> usize {
    let mut prev = 0i64;
    let mut cost = 0usize;
    for &(p, u) in pairs {
        let delta = u as i64 - p as i64;
        cost += (delta - prev).unsigned_abs() as usize;
        prev = delta;
    }
    cost
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Cell {
    len: u32,
    /// Predecessor state and the budget it was read at; `u32::MAX` = start.
    prev: u32,
    prev_c: u32,
}

const START: u32 = u32::MAX;
const EMPTY: Cell = Cell {
    len: 0,
    prev: START,
    prev_c: 0,
};

struct State {
    slot: usize,
    delta: i64,
}

/// Longest monotone matching with shift cost at most `k`. `is_match(slot,
/// u)` reports whether `blocks[slot]` hashes equal at y-position `u`;
/// `blocks` must be sorted by position. Ties are broken deterministically.
pub fn dp_match<F>(blocks: &[MatchBlock], y_len: usize, k: usize, mut is_match: F) -> Matching
where
    F: FnMut(usize, usize) -> bool,
{
    debug_assert!(blocks.windows(2).all(|w| w[0].pos < w[1].pos));
    let kk = k as i64;
    let width = 2 * k + 1;
    let mut states: Vec<State> = Vec::new();
    let mut table: Vec<Cell> = Vec::new();
    let mut slot_start: Vec<usize> = Vec::with_capacity(blocks.len() + 1);
    // Aggregate over committed states (far enough back that monotonicity
    // cannot bind) and its L1 transform.
    let mut agg = vec![EMPTY; width * (k + 1)];
    let mut reach = vec![EMPTY; width * (k + 1)];
    let mut committed_slots = 0usize;
    let at = |d: i64, c: usize| (d + kk) as usize * (k + 1) + c;

    for (slot, b) in blocks.iter().enumerate() {
        slot_start.push(states.len());
        // Commit slots whose distance exceeds 2k.
        let mut changed = false;
        while committed_slots < slot && b.pos - blocks[committed_slots].pos > 2 * k {
            for s in slot_start[committed_slots]..slot_start[committed_slots + 1] {
                let d = states[s].delta;
                for c in 0..=k {
                    let cell = table[s * (k + 1) + c];
                    if cell.len > agg[at(d, c)].len {
                        agg[at(d, c)] = Cell {
                            len: cell.len,
                            prev: s as u32,
                            prev_c: c as u32,
                        };
                        changed = true;
                    }
                }
            }
            committed_slots += 1;
        }
        if changed {
            for c in 0..=k {
                for d in -kk..=kk {
                    let mut best = agg[at(d, c)];
                    if c > 0 {
                        for nd in [d - 1, d, d + 1] {
                            if (-kk..=kk).contains(&nd) && reach[at(nd, c - 1)].len > best.len {
                                best = reach[at(nd, c - 1)];
                            }
                        }
                    }
                    reach[at(d, c)] = best;
                }
            }
        }
        for delta in -kk..=kk {
            let u = b.pos as i64 + delta;
            if u < 0 || u as usize + b.len > y_len || !is_match(slot, u as usize) {
                continue;
            }
            let mut cells = vec![EMPTY; k + 1];
            for (c, cell) in cells.iter_mut().enumerate() {
                if delta.unsigned_abs() as usize <= c {
                    cell.len = 1;
                }
                if committed_slots > 0 {
                    let r = reach[at(delta, c)];
                    if r.len > 0 && r.len + 1 > cell.len {
                        *cell = Cell {
                            len: r.len + 1,
                            prev: r.prev,
                            prev_c: r.prev_c,
                        };
                    }
                }
            }
            for s1 in slot_start[committed_slots]..slot_start[slot] {
                let st = &states[s1];
                let u1 = blocks[st.slot].pos as i64 + st.delta;
                if u1 >= u {
                    continue;
                }
                let step = (delta - st.delta).unsigned_abs() as usize;
                for c in step..=k {
                    let prev = table[s1 * (k + 1) + c - step];
                    if prev.len > 0 && prev.len + 1 > cells[c].len {
                        cells[c] = Cell {
                            len: prev.len + 1,
                            prev: s1 as u32,
                            prev_c: (c - step) as u32,
                        };
                    }
                }
            }
            states.push(State { slot, delta });
            table.extend_from_slice(&cells);
        }
    }

    let mut best: Option<(u32, usize)> = None;
    for s in 0..states.len() {
        let len = table[s * (k + 1) + k].len;
        if len > 0 && best.is_none_or(|(l, _)| len > l) {
            best = Some((len, s));
        }
    }
    let mut pairs = Vec::new();
    if let Some((_, mut s)) = best {
        let mut c = k;
        loop {
            let st = &states[s];
            let b = &blocks[st.slot];
            pairs.push((b.index, (b.pos as i64 + st.delta) as usize));
            let cell = table[s * (k + 1) + c];
            if cell.prev == START {
                break;
            }
            s = cell.prev as usize;
            c = cell.prev_c as usize;
        }
    }
    pairs.reverse();
    let positions: Vec<(usize, usize)> = pairs
        .iter()
        .map(|&(j, u)| {
            let b = blocks.iter().find(|b| b.index == j).expect("matched block present");
            (b.pos, u)
        })
        .collect();
    let cost = shift_cost(&positions);
    assert!(cost <= k, "matching cost {cost} exceeds budget {k}");
    assert!(
        pairs.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1),
        "matching is not monotone"
    );
    Matching { pairs, cost }
}
