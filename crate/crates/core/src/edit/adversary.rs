//! Edit scripts used to corrupt Alice's string in experiments.

use alloc::vec::Vec;

use rand::Rng;

use crate::bits::BitString;
use crate::editdist::edit_distance_at_most;
use crate::error::{invalid, Error};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EditStyle {
    /// Operations at independent uniform positions.
    Random,
    /// Operations inside one window of about `4k` positions.
    Clustered,
    /// Operations inside the first `2k` positions.
    Prefix,
}

impl EditStyle {
    pub fn as_str(self) -> &'static str {
        match self {
            EditStyle::Random => "random",
            EditStyle::Clustered => "clustered",
            EditStyle::Prefix => "prefix",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "random" => Some(EditStyle::Random),
            "clustered" => Some(EditStyle::Clustered),
            "prefix" => Some(EditStyle::Prefix),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EditOp {
    Insert { at: usize, bit: bool },
    Delete { at: usize },
    Substitute { at: usize },
}

/// Applies exactly `k` operations (insert, delete, substitute chosen
/// uniformly) at positions drawn according to `style`. The result is
/// checked to be within edit distance `k` of `x`.
pub fn edit_adversary<R: Rng + ?Sized>(x: &BitString, k: usize, style: EditStyle, rng: &mut R) -> Result<(BitString, Vec<EditOp>), Error> {
    if k > x.len() {
        return Err(invalid("more edits than bits"));
    }
    let mut bits: Vec<bool> = (0..x.len()).map(|i| x.get(i)).collect();
    let mut ops = Vec::with_capacity(k);
    let window = match style {
        EditStyle::Random => None,
        EditStyle::Clustered => {
            let w = (4 * k).max(1).min(x.len().max(1));
            let start = rng.gen_range(0..=x.len().saturating_sub(w));
            Some((start, w))
        }
        EditStyle::Prefix => Some((0, (2 * k).max(1).min(x.len().max(1)))),
    };
    for _ in 0..k {
        let len = bits.len();
        let pick = |rng: &mut R, limit: usize| -> usize {
            match window {
                None => rng.gen_range(0..limit),
                Some((s, w)) => {
                    let lo = s.min(limit - 1);
                    let hi = (s + w).min(limit);
                    rng.gen_range(lo..hi.max(lo + 1))
                }
            }
        };
        let kind = if len == 0 { 0 } else { rng.gen_range(0..3) };
        let op = match kind {
            0 => {
                let at = pick(rng, len + 1);
                let bit = rng.gen_bool(0.5);
                bits.insert(at, bit);
                EditOp::Insert { at, bit }
            }
            1 => {
                let at = pick(rng, len);
                bits.remove(at);
                EditOp::Delete { at }
            }
            _ => {
                let at = pick(rng, len);
                bits[at] = !bits[at];
                EditOp::Substitute { at }
            }
        };
        ops.push(op);
    }
    let y = BitString::from_bools(&bits);
    if edit_distance_at_most(x, &y, k).is_none() {
        return Err(invalid("edit script exceeded its distance budget"));
    }
    Ok((y, ops))
}
