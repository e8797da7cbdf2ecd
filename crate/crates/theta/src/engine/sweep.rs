//! Bucketed enumeration of a whole diagonal class.
//!
//! For a fixed positive diagonal (d_1..d_g) the off-diagonal entries of any
//! solution Gram matrix are bounded by Cauchy-Schwarz, so the full table of
//! coefficients { a(N) : diag(N) = d } fits in one mixed-radix array.  One
//! depth-first pass over the shell product visits every solution tuple once
//! and increments its bucket; this is the same enumeration as the per-index
//! search, bucketing at the leaf instead of filtering.
//!
//! The outermost and innermost columns run over one representative per
//! (v, -v) pair; each visited tuple then stands for four sign variants,
//! whose keys are obtained by flipping the inner products involving the
//! flipped columns.  Exact psd filtering happens when the buckets are
//! decoded; a nonzero count in a non-psd bucket is impossible and asserted
//! by the caller.

use super::dfs::dot16;
use super::ShellData;
use crate::qforms::FourierIndex;
use rayon::prelude::*;
use std::sync::Arc;

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

/// Mixed-radix layout of the off-diagonal key space for a fixed diagonal.
pub struct KeySpace {
    pub genus: usize,
    pub diag: Vec<i64>,
    /// (bound, radix) for pair (i,j), i<j, indexed by i*g+j; bound from
    /// Cauchy-Schwarz, radix giving row-major upper-triangle mixed radix.
    pp: Vec<(i64, usize)>,
    pub size: usize,
}

impl KeySpace {
    pub fn new(diag: &[i64]) -> Self {
        let g = diag.len();
        let mut order = Vec::new();
        for i in 0..g {
            for j in i + 1..g {
                order.push((i, j, isqrt(diag[i] * diag[j])));
            }
        }
        let mut pp = vec![(0i64, 0usize); g * g];
        let mut size = 1usize;
        for &(i, j, bound) in order.iter().rev() {
            pp[i * g + j] = (bound, size);
            size = size
                .checked_mul((2 * bound + 1) as usize)
                .expect("key space overflow");
        }
        assert!(size <= 1 << 26, "key space too large: {size}");
        KeySpace { genus: g, diag: diag.to_vec(), pp, size }
    }

    #[inline(always)]
    pub fn pair(&self, i: usize, j: usize) -> (i64, usize) {
        self.pp[i * self.genus + j]
    }

    pub fn decode(&self, key: usize) -> FourierIndex {
        let g = self.genus;
        let mut n = vec![0i64; g * g];
        for i in 0..g {
            n[i * g + i] = self.diag[i];
        }
        for i in 0..g {
            for j in i + 1..g {
                let (bound, radix) = self.pair(i, j);
                let w = (2 * bound + 1) as usize;
                let b = ((key / radix) % w) as i64 - bound;
                n[i * g + j] = b;
                n[j * g + i] = b;
            }
        }
        FourierIndex::new(g, n).expect("symmetric by construction")
    }

    pub fn encode(&self, n: &FourierIndex) -> Option<usize> {
        let g = self.genus;
        let mut key = 0usize;
        for i in 0..g {
            for j in i + 1..g {
                let (bound, radix) = self.pair(i, j);
                let b = n.entry(i, j);
                if b.abs() > bound {
                    return None;
                }
                key += ((b + bound) as usize) * radix;
            }
        }
        Some(key)
    }

    /// All psd indices of the class, with their keys.
    pub fn psd_indices(&self) -> Vec<(usize, FourierIndex)> {
        (0..self.size)
            .filter_map(|k| {
                let n = self.decode(k);
                n.is_psd().then_some((k, n))
            })
            .collect()
    }
}

#[inline(always)]
fn enc_both(b: i64, bound: i64, radix: usize) -> (usize, usize) {
    debug_assert!(b.abs() <= bound);
    (((b + bound) as usize) * radix, ((bound - b) as usize) * radix)
}

fn is_canonical(v: &[i16]) -> bool {
    for &x in v {
        if x != 0 {
            return x > 0;
        }
    }
    false
}

/// Full table for a positive diagonal pattern: bucket[key] = count.
/// `shells[j]` must be the shell of norm `diag[j]` (sorted, negation closed).
pub fn sweep_diag_class(shells: &[Arc<ShellData>], ks: &KeySpace) -> Vec<u64> {
    let g = ks.genus;
    assert!(g >= 2);
    let last = g - 1;
    let shell0 = &shells[0];
    let half0: Vec<u32> = (0..shell0.count)
        .filter(|&i| is_canonical(shell0.raw(i)))
        .map(|i| i as u32)
        .collect();
    let half_last: Vec<u32> = (0..shells[last].count)
        .filter(|&i| is_canonical(shells[last].raw(i)))
        .map(|i| i as u32)
        .collect();
    assert_eq!(half0.len() * 2, shell0.count, "shell not negation-paired");
    assert_eq!(half_last.len() * 2, shells[last].count);

    half0
        .par_iter()
        .fold(
            || vec![0u64; ks.size],
            |mut buckets, &i0| {
                let sv0 = shell0.svec(i0 as usize);
                let mut state = SweepState {
                    shells,
                    ks,
                    sv0,
                    half_last: &half_last,
                    mid_svecs: Vec::with_capacity(g),
                    mid_pp: (1..last).map(|i| ks.pair(i, last)).collect(),
                };
                state.descend(1, 0, 0, 0, &mut buckets);
                buckets
            },
        )
        .reduce(
            || vec![0u64; ks.size],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

struct SweepState<'a> {
    shells: &'a [Arc<ShellData>],
    ks: &'a KeySpace,
    sv0: &'a [i16],
    half_last: &'a [u32],
    /// svec slices of the chosen middle columns (levels 1..j-1)
    mid_svecs: Vec<&'a [i16]>,
    /// (bound, radix) of the pairs (i, last) for middle i
    mid_pp: Vec<(i64, usize)>,
}

impl<'a> SweepState<'a> {
    /// base_mid: digits of pairs among middle columns (never flip);
    /// base_zero_p/m: digits of pairs (0,k) for chosen middle k, for +-x0.
    fn descend(
        &mut self,
        j: usize,
        base_mid: usize,
        base_zero_p: usize,
        base_zero_m: usize,
        buckets: &mut [u64],
    ) {
        let g = self.ks.genus;
        let last = g - 1;
        if j == last {
            self.leaf_loop(base_mid, [base_zero_p, base_zero_m], buckets);
            return;
        }
        let shell = &self.shells[j];
        let (bound0, radix0) = self.ks.pair(0, j);
        for idx in 0..shell.count {
            let v = shell.raw(idx);
            let b0 = dot16(self.sv0, v);
            let (z_p, z_m) = enc_both(b0, bound0, radix0);
            let mut mid_add = 0usize;
            let mut ok = true;
            for (i, sv) in self.mid_svecs.iter().enumerate() {
                let b = dot16(sv, v);
                let (bound, radix) = self.ks.pair(i + 1, j);
                if b.abs() > bound {
                    ok = false;
                    break;
                }
                mid_add += ((b + bound) as usize) * radix;
            }
            debug_assert!(ok, "Cauchy-Schwarz violation among middle columns");
            if !ok {
                continue;
            }
            self.mid_svecs.push(shell.svec(idx));
            self.descend(
                j + 1,
                base_mid + mid_add,
                base_zero_p + z_p,
                base_zero_m + z_m,
                buckets,
            );
            self.mid_svecs.pop();
        }
    }

    #[inline]
    fn leaf_loop(&self, base_mid: usize, bz: [usize; 2], buckets: &mut [u64]) {
        let g = self.ks.genus;
        let last = g - 1;
        let shell = &self.shells[last];
        let (bound0l, radix0l) = self.ks.pair(0, last);
        for &il in self.half_last {
            let v = shell.raw(il as usize);
            let mut a_p = base_mid;
            let mut a_m = base_mid;
            for (sv, &(bound, radix)) in self.mid_svecs.iter().zip(&self.mid_pp) {
                let b = dot16(sv, v);
                let (p, m) = enc_both(b, bound, radix);
                a_p += p;
                a_m += m;
            }
            let b0l = dot16(self.sv0, v);
            let (z_p, z_m) = enc_both(b0l, bound0l, radix0l);
            let z = [z_p, z_m];
            let a = [a_p, a_m];
            // sign variants (s0, sl): pair (0,last) flips with s0 XOR sl
            buckets[bz[0] + a[0] + z[0]] += 1;
            buckets[bz[0] + a[1] + z[1]] += 1;
            buckets[bz[1] + a[0] + z[1]] += 1;
            buckets[bz[1] + a[1] + z[0]] += 1;
        }
    }
}
