//! Norm-shell enumeration against an integral Gram matrix.
//!
//! Ranges for each coordinate are proposed by a floating-point LDL
//! decomposition of the Gram matrix, widened by one unit on each side, and
//! every candidate is filtered by its exact integer norm.  Completeness of
//! the widened float bounds is audited in tests against direct box
//! enumeration on small lattices, and at genus one against the published
//! shell counts.

/// All vectors of one exact norm, in lattice basis coordinates
/// (flattened, `rank` entries per vector, sorted lexicographically).
#[derive(Clone, Debug)]
pub struct NormShell {
    pub norm: i64,
    pub rank: usize,
    vectors: Vec<i32>,
}

impl NormShell {
    pub fn empty(norm: i64, rank: usize) -> Self {
        NormShell { norm, rank, vectors: Vec::new() }
    }

    pub fn count(&self) -> u64 {
        (self.vectors.len() / self.rank.max(1)) as u64
    }

    pub fn iter(&self) -> impl Iterator<Item = &[i32]> {
        self.vectors.chunks_exact(self.rank)
    }

    pub fn vector(&self, i: usize) -> &[i32] {
        &self.vectors[i * self.rank..(i + 1) * self.rank]
    }

    pub fn raw(&self) -> &[i32] {
        &self.vectors
    }
}

fn ldl_f64(gram: &[i64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a: Vec<f64> = gram.iter().map(|&x| x as f64).collect();
    let mut d = vec![0.0; n];
    let mut u = vec![0.0; n * n];
    for i in 0..n {
        d[i] = a[i * n + i];
        assert!(d[i] > 0.0, "Gram matrix is not positive definite");
        for j in i + 1..n {
            u[i * n + j] = a[i * n + j] / d[i];
        }
        for k in i + 1..n {
            for l in k..n {
                a[k * n + l] -= d[i] * u[i * n + k] * u[i * n + l];
            }
        }
    }
    (d, u)
}

fn exact_norm(gram: &[i64], n: usize, v: &[i64]) -> i64 {
    let mut s = 0i64;
    for i in 0..n {
        let mut row = 0i64;
        for j in 0..n {
            row += gram[i * n + j] * v[j];
        }
        s += row * v[i];
    }
    s
}

/// Visits every vector with exact norm <= max_norm exactly once.
fn enumerate_up_to(gram: &[i64], rank: usize, max_norm: i64, mut visit: impl FnMut(i64, &[i64])) {
    if rank == 0 {
        visit(0, &[]);
        return;
    }
    let (d, u) = ldl_f64(gram, rank);
    let mut v = vec![0i64; rank];
    // levels from the last coordinate down to the first
    fn rec(
        i: isize,
        rem: f64,
        gram: &[i64],
        rank: usize,
        d: &[f64],
        u: &[f64],
        v: &mut Vec<i64>,
        max_norm: i64,
        visit: &mut impl FnMut(i64, &[i64]),
    ) {
        if i < 0 {
            let norm = exact_norm(gram, rank, v);
            if norm <= max_norm {
                visit(norm, v);
            }
            return;
        }
        let i = i as usize;
        let mut c = 0.0;
        for j in i + 1..rank {
            c += u[i * rank + j] * v[j] as f64;
        }
        let r = (rem.max(0.0) / d[i]).sqrt();
        let lo = (-c - r).ceil() as i64 - 1;
        let hi = (-c + r).floor() as i64 + 1;
        for t in lo..=hi {
            v[i] = t;
            let used = d[i] * (t as f64 + c) * (t as f64 + c);
            rec(i as isize - 1, rem - used, gram, rank, d, u, v, max_norm, visit);
        }
        v[i] = 0;
    }
    rec(
        rank as isize - 1,
        max_norm as f64 + 1e-6,
        gram,
        rank,
        &d,
        &u,
        &mut v,
        max_norm,
        &mut visit,
    );
}

/// Complete shells for norms `0..=max_norm`, each sorted lexicographically.
pub fn enumerate_shells(gram: &[i64], rank: usize, max_norm: i64) -> Vec<NormShell> {
    let mut buckets: Vec<Vec<Vec<i32>>> = vec![Vec::new(); (max_norm.max(0) + 1) as usize];
    if max_norm >= 0 {
        enumerate_up_to(gram, rank, max_norm, |norm, v| {
            let w: Vec<i32> = v.iter().map(|&x| i32::try_from(x).expect("coordinate fits i32")).collect();
            buckets[norm as usize].push(w);
        });
    }
    buckets
        .into_iter()
        .enumerate()
        .map(|(norm, mut vs)| {
            vs.sort_unstable();
            NormShell {
                norm: norm as i64,
                rank,
                vectors: vs.into_iter().flatten().collect(),
            }
        })
        .collect()
}

/// Number of vectors of exact norm `n`, without storing them.
pub fn shell_count(gram: &[i64], rank: usize, n: i64) -> u64 {
    if n < 0 {
        return 0;
    }
    let mut count = 0u64;
    enumerate_up_to(gram, rank, n, |norm, _| {
        if norm == n {
            count += 1;
        }
    });
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    const D4_GRAM: [i64; 16] = [2, -1, 0, 0, -1, 2, -1, -1, 0, -1, 2, 0, 0, -1, 0, 2];

    /// Direct box enumeration oracle: all v with coordinates in a wide box,
    /// filtered by exact norm.
    fn box_counts(gram: &[i64], rank: usize, max_norm: i64, half_box: i64) -> Vec<u64> {
        let mut counts = vec![0u64; (max_norm + 1) as usize];
        let mut v = vec![0i64; rank];
        fn rec(
            k: usize,
            rank: usize,
            half_box: i64,
            v: &mut Vec<i64>,
            gram: &[i64],
            max_norm: i64,
            counts: &mut Vec<u64>,
        ) {
            if k == rank {
                let norm = super::exact_norm(gram, rank, v);
                if (0..=max_norm).contains(&norm) {
                    counts[norm as usize] += 1;
                }
                return;
            }
            for t in -half_box..=half_box {
                v[k] = t;
                rec(k + 1, rank, half_box, v, gram, max_norm, counts);
            }
        }
        rec(0, rank, half_box, &mut v, gram, max_norm, &mut counts);
        counts
    }

    #[test]
    fn d4_shells_match_box_enumeration() {
        let shells = enumerate_shells(&D4_GRAM, 4, 6);
        let oracle = box_counts(&D4_GRAM, 4, 6, 6);
        for n in 0..=6 {
            assert_eq!(shells[n as usize].count(), oracle[n as usize], "norm {n}");
        }
        // D4 root system
        assert_eq!(shells[2].count(), 24);
    }

    #[test]
    fn a2_shells_match_box_enumeration() {
        let gram = [2i64, -1, -1, 2];
        let shells = enumerate_shells(&gram, 2, 14);
        let oracle = box_counts(&gram, 2, 14, 10);
        for n in 0..=14 {
            assert_eq!(shells[n as usize].count(), oracle[n as usize], "norm {n}");
        }
        assert_eq!(shells[2].count(), 6);
    }

    #[test]
    fn z3_shell_counts_are_sums_of_three_squares() {
        let gram = [1i64, 0, 0, 0, 1, 0, 0, 0, 1];
        let shells = enumerate_shells(&gram, 3, 9);
        let expected = [1u64, 6, 12, 8, 6, 24, 24, 0, 12, 30];
        for (n, &e) in expected.iter().enumerate() {
            assert_eq!(shells[n].count(), e, "norm {n}");
        }
    }

    #[test]
    fn shells_are_sorted_and_negation_closed() {
        let shells = enumerate_shells(&D4_GRAM, 4, 4);
        for shell in &shells {
            let mut prev: Option<&[i32]> = None;
            for v in shell.iter() {
                if let Some(p) = prev {
                    assert!(p < v, "not sorted");
                }
                prev = Some(v);
                let neg: Vec<i32> = v.iter().map(|x| -x).collect();
                assert!(shell.iter().any(|w| w == neg.as_slice()), "missing -v");
            }
        }
    }

    #[test]
    fn zero_shell_is_origin_only() {
        let shells = enumerate_shells(&D4_GRAM, 4, 0);
        assert_eq!(shells[0].count(), 1);
        assert_eq!(shells[0].vector(0), &[0, 0, 0, 0]);
    }

    #[test]
    fn count_only_matches_stored() {
        let shells = enumerate_shells(&D4_GRAM, 4, 6);
        for n in 0..=6 {
            assert_eq!(shell_count(&D4_GRAM, 4, n), shells[n as usize].count());
        }
    }
}
