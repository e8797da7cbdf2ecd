//! Depth-first assembly of solution matrices X with X'SX = N.
//!
//! Columns are chosen from the norm shells of the diagonal entries; partial
//! assignments are pruned by the exact inner-product constraints.  For
//! counting, candidates at each level are taken from buckets keyed by the inner
//! product with the first column, which realizes the Cauchy-Schwarz pruning
//! exactly (|x.Sy| <= sqrt(norm x * norm y) bounds the bucket range).

use super::ShellData;
use crate::qforms::FourierIndex;
use rayon::prelude::*;
use std::sync::Arc;

pub const STRIDE: usize = 16;

#[inline(always)]
pub fn dot16(a: &[i16], b: &[i16]) -> i64 {
    let mut s = 0i32;
    for k in 0..STRIDE {
        s += a[k] as i32 * b[k] as i32;
    }
    s as i64
}

fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i64;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    while r * r > n {
        r -= 1;
    }
    r
}

/// Buckets of shell indices keyed by the inner product with a fixed svec.
struct DotIndex {
    bound: i64,
    buckets: Vec<Vec<u32>>,
}

impl DotIndex {
    fn build(shell: &ShellData, sv0: &[i16], bound: i64) -> Self {
        let mut buckets = vec![Vec::new(); (2 * bound + 1) as usize];
        for i in 0..shell.count {
            let d = dot16(sv0, shell.raw(i));
            debug_assert!(d.abs() <= bound, "Cauchy-Schwarz violation");
            buckets[(d + bound) as usize].push(i as u32);
        }
        DotIndex { bound, buckets }
    }

    fn get(&self, value: i64) -> &[u32] {
        if value.abs() > self.bound {
            return &[];
        }
        &self.buckets[(value + self.bound) as usize]
    }
}

/// Counts solutions for a positive-diagonal index `n` (already permuted so that
/// column 0 is processed first), parallel over the first column's shell.
pub fn count_solutions(shells: &[Arc<ShellData>], n: &FourierIndex) -> u64 {
    let g = n.genus();
    debug_assert!(g >= 1);
    if g == 1 {
        return shells[0].count as u64;
    }
    let shell0 = &shells[0];
    (0..shell0.count)
        .into_par_iter()
        .map(|i0| {
            let sv0 = shell0.svec(i0);
            // one index per distinct later norm
            let mut norms: Vec<i64> = (1..g).map(|j| n.entry(j, j)).collect();
            norms.sort_unstable();
            norms.dedup();
            let indexes: Vec<(i64, DotIndex)> = norms
                .iter()
                .map(|&d| {
                    let j = (1..g).find(|&j| n.entry(j, j) == d).unwrap();
                    let bound = isqrt(n.entry(0, 0) * d);
                    (d, DotIndex::build(&shells[j], sv0, bound))
                })
                .collect();
            let index_for = |d: i64| &indexes.iter().find(|(x, _)| *x == d).unwrap().1;

            let mut chosen: Vec<usize> = Vec::with_capacity(g);
            chosen.push(i0);
            count_level(1, n, shells, &mut chosen, &index_for)
        })
        .sum()
}

fn count_level<'a>(
    j: usize,
    n: &FourierIndex,
    shells: &[Arc<ShellData>],
    chosen: &mut Vec<usize>,
    index_for: &impl Fn(i64) -> &'a DotIndex,
) -> u64 {
    let g = n.genus();
    let shell_j = &shells[j];
    let candidates = index_for(n.entry(j, j)).get(n.entry(0, j));
    if j == g - 1 {
        // count instead of recursing
        let mut c = 0u64;
        'cand: for &idx in candidates {
            let v = shell_j.raw(idx as usize);
            for i in 1..j {
                if dot16(shells[i].svec(chosen[i]), v) != n.entry(i, j) {
                    continue 'cand;
                }
            }
            c += 1;
        }
        return c;
    }
    let mut total = 0u64;
    'cand: for &idx in candidates {
        let v = shell_j.raw(idx as usize);
        for i in 1..j {
            if dot16(shells[i].svec(chosen[i]), v) != n.entry(i, j) {
                continue 'cand;
            }
        }
        chosen.push(idx as usize);
        total += count_level(j + 1, n, shells, chosen, index_for);
        chosen.pop();
    }
    total
}

/// Visits every solution X (column-major, `rank` entries per column) exactly
/// once, in lexicographic order of chosen shell indices.  Sequential.
pub fn visit_solutions(
    shells: &[Arc<ShellData>],
    n: &FourierIndex,
    rank: usize,
    visit: &mut impl FnMut(&[i32]),
) {
    let g = n.genus();
    if g == 0 {
        visit(&[]);
        return;
    }
    let mut x = vec![0i32; rank * g];
    let mut chosen: Vec<usize> = Vec::with_capacity(g);
    visit_level(0, n, shells, rank, &mut chosen, &mut x, visit);
}

fn visit_level(
    j: usize,
    n: &FourierIndex,
    shells: &[Arc<ShellData>],
    rank: usize,
    chosen: &mut Vec<usize>,
    x: &mut Vec<i32>,
    visit: &mut impl FnMut(&[i32]),
) {
    let g = n.genus();
    let shell_j = &shells[j];
    'cand: for idx in 0..shell_j.count {
        let v = shell_j.raw(idx);
        for i in 0..j {
            if dot16(shells[i].svec(chosen[i]), v) != n.entry(i, j) {
                continue 'cand;
            }
        }
        for k in 0..rank {
            x[j * rank + k] = v[k] as i32;
        }
        if j == g - 1 {
            visit(x);
        } else {
            chosen.push(idx);
            visit_level(j + 1, n, shells, rank, chosen, x, visit);
            chosen.pop();
        }
    }
}
