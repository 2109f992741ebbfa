//! Banded Levenshtein distance over bit strings.

use alloc::vec;

use crate::bits::BitString;

/// Returns `Some(ED(x, y))` when the edit distance is at most `bound`,
/// otherwise `None`. Only the diagonal band of half-width `bound` is filled,
/// so the cost is `O((|x| + 1) * (2 * bound + 1))`.
pub fn edit_distance_at_most(x: &BitString, y: &BitString, bound: usize) -> Option<usize> {
    let (n, m) = (x.len(), y.len());
    if n.abs_diff(m) > bound {
        return None;
    }
    const INF: usize = usize::MAX / 2;
    let width = 2 * bound + 1;
    // row[i][d] holds D(i, j) with j = i + d - bound.
    let mut prev = vec![INF; width];
    let mut cur = vec![INF; width];
    for d in 0..width {
        let j = d as isize - bound as isize;
        if (0..=m as isize).contains(&j) {
            prev[d] = j as usize;
        }
    }
    for i in 1..=n {
        let xi = x.get(i - 1);
        for d in 0..width {
            let j = i as isize + d as isize - bound as isize;
            if j < 0 || j > m as isize {
                cur[d] = INF;
                continue;
            }
            let j = j as usize;
            if j == 0 {
                cur[d] = i;
                continue;
            }
            // D(i-1, j-1) is at the same d in the previous row.
            let sub = prev[d] + usize::from(xi != y.get(j - 1));
            // D(i-1, j) is at d + 1 in the previous row.
            let del = if d + 1 < width { prev[d + 1] + 1 } else { INF };
            // D(i, j-1) is at d - 1 in the current row.
            let ins = if d > 0 { cur[d - 1] + 1 } else { INF };
            cur[d] = sub.min(del).min(ins);
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    let d = m + bound - n;
    let dist = prev[d];
    (dist <= bound).then_some(dist)
}
