//! Smith normal form over the integers.

#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Non-zero diagonal entries of the Smith normal form of `rows` (which may
/// be ragged-free but otherwise any shape), positive and in divisibility
/// order `d1 | d2 | ...`. Pivots are chosen by minimal absolute value.
pub fn smith_diagonal(rows: &[Vec<i64>], cols: usize) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            debug_assert_eq!(r.len(), cols);
            r.iter().map(|&v| BigInt::from(v)).collect()
        })
        .collect();
    let nrows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(cols) {
        // smallest non-zero entry of the remaining block
        let Some((pr, pc)) = min_abs_entry(&m, t, cols) else {
            break;
        };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut changed = false;
            // clear column t
            for r in t + 1..nrows {
                if m[r][t].is_zero() {
                    continue;
                }
                let q = m[r][t].div_floor(&m[t][t]);
                for c in t..cols {
                    let delta = &q * &m[t][c];
                    m[r][c] -= delta;
                }
                if !m[r][t].is_zero() {
                    changed = true;
                }
            }
            // clear row t
            for c in t + 1..cols {
                if m[t][c].is_zero() {
                    continue;
                }
                let q = m[t][c].div_floor(&m[t][t]);
                for r in t..nrows {
                    let delta = &q * &m[r][t];
                    m[r][c] -= delta;
                }
                if !m[t][c].is_zero() {
                    changed = true;
                }
            }
            if changed {
                let (pr, pc) = min_abs_in_cross(&m, t, cols);
                m.swap(t, pr);
                for row in m.iter_mut() {
                    row.swap(t, pc);
                }
                continue;
            }
            // pivot must divide the rest of the block
            let bad = (t + 1..nrows)
                .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
                .find(|&(r, c)| !(&m[r][c] % &m[t][t]).is_zero());
            match bad {
                Some((r, _)) => {
                    for c in t..cols {
                        let v = m[r][c].clone();
                        m[t][c] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

fn min_abs_entry(m: &[Vec<BigInt>], t: usize, cols: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (r, row) in m.iter().enumerate().skip(t) {
        for (c, v) in row.iter().enumerate().take(cols).skip(t) {
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(br, bc)| v.abs() < m[br][bc].abs()) {
                best = Some((r, c));
            }
        }
    }
    best
}

/// Smallest non-zero entry in row `t` or column `t` (the pivot is non-zero).
fn min_abs_in_cross(m: &[Vec<BigInt>], t: usize, cols: usize) -> (usize, usize) {
    let mut best = (t, t);
    for r in t..m.len() {
        if !m[r][t].is_zero() && m[r][t].abs() < m[best.0][best.1].abs() {
            best = (r, t);
        }
    }
    for c in t..cols {
        if !m[t][c].is_zero() && m[t][c].abs() < m[best.0][best.1].abs() {
            best = (t, c);
        }
    }
    best
}
