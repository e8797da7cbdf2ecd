//! Integral quadratic form indices and the two type-one functions: the
//! minimum m and the dyadic trace w, the latter with exact LP certificates.
//!
//! A Fourier index stores the integral matrix N = 2T; the paper-scale form is
//! T = N/2 throughout.

use crate::exact::{
    floor_sqrt, rat, simplex_max, ExactMatrix, Int, LpProblem, Rational,
};
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QformError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("index is not positive semidefinite")]
    NotPositiveSemidefinite,
    #[error("minimum is defined only for positive definite forms")]
    NotDefinite,
    #[error("dyadic trace certification failed: {0}")]
    Certification(String),
}

/// Genus-g integral symmetric index N = 2T of a Fourier coefficient.
///
/// Serialization (upper triangle, row-major) round-trips bit-exactly; the
/// ordering used for maps is (genus, entries lex).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FourierIndex {
    genus: usize,
    /// Row-major g*g symmetric matrix.
    n: Vec<i64>,
}

impl FourierIndex {
    pub fn new(genus: usize, entries: Vec<i64>) -> Result<Self, QformError> {
        if entries.len() != genus * genus {
            return Err(QformError::NotSymmetric);
        }
        for i in 0..genus {
            for j in 0..i {
                if entries[i * genus + j] != entries[j * genus + i] {
                    return Err(QformError::NotSymmetric);
                }
            }
        }
        Ok(FourierIndex { genus, n: entries })
    }

    pub fn zero(genus: usize) -> Self {
        FourierIndex { genus, n: vec![0; genus * genus] }
    }

    pub fn diag(d: &[i64]) -> Self {
        let g = d.len();
        let mut n = vec![0i64; g * g];
        for (i, &x) in d.iter().enumerate() {
            n[i * g + i] = x;
        }
        FourierIndex { genus: g, n }
    }

    pub fn scalar(x: i64) -> Self {
        FourierIndex { genus: 1, n: vec![x] }
    }

    pub fn from_upper(genus: usize, upper: &[i64]) -> Result<Self, QformError> {
        if upper.len() != genus * (genus + 1) / 2 {
            return Err(QformError::NotSymmetric);
        }
        let mut n = vec![0i64; genus * genus];
        let mut k = 0;
        for i in 0..genus {
            for j in i..genus {
                n[i * genus + j] = upper[k];
                n[j * genus + i] = upper[k];
                k += 1;
            }
        }
        Ok(FourierIndex { genus, n })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.n[i * self.genus + j]
    }

    pub fn entries(&self) -> &[i64] {
        &self.n
    }

    pub fn trace(&self) -> i64 {
        (0..self.genus).map(|i| self.entry(i, i)).sum()
    }

    pub fn upper_triangle(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.genus * (self.genus + 1) / 2);
        for i in 0..self.genus {
            for j in i..self.genus {
                out.push(self.entry(i, j));
            }
        }
        out
    }

    /// Exact positive semidefiniteness: every principal minor (over all index
    /// subsets, not only leading ones) is nonnegative.
    pub fn is_psd(&self) -> bool {
        let g = self.genus;
        for mask in 1u32..(1 << g) {
            let idx: Vec<usize> = (0..g).filter(|&i| mask & (1 << i) != 0).collect();
            if principal_minor(&self.n, g, &idx) < 0 {
                return false;
            }
        }
        true
    }

    /// Exact positive definiteness via leading principal minors.
    pub fn is_positive_definite(&self) -> bool {
        let g = self.genus;
        (1..=g).all(|k| {
            let idx: Vec<usize> = (0..k).collect();
            principal_minor(&self.n, g, &idx) > 0
        })
    }

    pub fn delete_row_col(&self, i: usize) -> FourierIndex {
        let g = self.genus;
        let mut n = Vec::with_capacity((g - 1) * (g - 1));
        for r in 0..g {
            if r == i {
                continue;
            }
            for c in 0..g {
                if c == i {
                    continue;
                }
                n.push(self.entry(r, c));
            }
        }
        FourierIndex { genus: g - 1, n }
    }

    /// Block sum `self (+) other` (zero off-diagonal blocks).
    pub fn block_sum(&self, other: &FourierIndex) -> FourierIndex {
        let g1 = self.genus;
        let g2 = other.genus;
        let g = g1 + g2;
        let mut n = vec![0i64; g * g];
        for i in 0..g1 {
            for j in 0..g1 {
                n[i * g + j] = self.entry(i, j);
            }
        }
        for i in 0..g2 {
            for j in 0..g2 {
                n[(g1 + i) * g + (g1 + j)] = other.entry(i, j);
            }
        }
        FourierIndex { genus: g, n }
    }

    /// Combined index [[N1, B],[B', N2]] for an off-diagonal integer block.
    pub fn with_off_block(n1: &FourierIndex, n2: &FourierIndex, block: &[i64]) -> FourierIndex {
        let g1 = n1.genus;
        let g2 = n2.genus;
        assert_eq!(block.len(), g1 * g2);
        let g = g1 + g2;
        let mut out = n1.block_sum(n2);
        for i in 0..g1 {
            for j in 0..g2 {
                out.n[i * g + (g1 + j)] = block[i * g2 + j];
                out.n[(g1 + j) * g + i] = block[i * g2 + j];
            }
        }
        out
    }

    /// Conjugation U' N U for an integer matrix U (columns transform).
    pub fn conjugate(&self, u: &[i64]) -> FourierIndex {
        let g = self.genus;
        assert_eq!(u.len(), g * g);
        let mut nu = vec![0i64; g * g];
        for i in 0..g {
            for j in 0..g {
                let mut s = 0i64;
                for k in 0..g {
                    s += self.entry(i, k) * u[k * g + j];
                }
                nu[i * g + j] = s;
            }
        }
        let mut out = vec![0i64; g * g];
        for i in 0..g {
            for j in 0..g {
                let mut s = 0i64;
                for k in 0..g {
                    s += u[k * g + i] * nu[k * g + j];
                }
                out[i * g + j] = s;
            }
        }
        FourierIndex { genus: g, n: out }
    }

    /// Applies a simultaneous row/column permutation: entry (i,j) of the
    /// result is entry (perm[i], perm[j]) of self.
    pub fn permuted(&self, perm: &[usize]) -> FourierIndex {
        let g = self.genus;
        let mut n = vec![0i64; g * g];
        for i in 0..g {
            for j in 0..g {
                n[i * g + j] = self.entry(perm[i], perm[j]);
            }
        }
        FourierIndex { genus: g, n }
    }

    pub fn to_exact_matrix(&self) -> ExactMatrix {
        ExactMatrix::from_rows(
            (0..self.genus)
                .map(|i| (0..self.genus).map(|j| rat(self.entry(i, j))).collect())
                .collect(),
        )
    }
}

/// Exact principal minor over an index subset, by fraction-free elimination
/// in i128 (Bareiss).
fn principal_minor(n: &[i64], g: usize, idx: &[usize]) -> i128 {
    let k = idx.len();
    let mut a = vec![0i128; k * k];
    for (r, &i) in idx.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            a[r * k + c] = n[i * g + j] as i128;
        }
    }
    bareiss_det(&mut a, k)
}

fn bareiss_det(a: &mut [i128], k: usize) -> i128 {
    if k == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for p in 0..k - 1 {
        if a[p * k + p] == 0 {
            let swap = (p + 1..k).find(|&r| a[r * k + p] != 0);
            match swap {
                Some(r) => {
                    for c in 0..k {
                        a.swap(p * k + c, r * k + c);
                    }
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for r in p + 1..k {
            for c in p + 1..k {
                a[r * k + c] = (a[r * k + c] * a[p * k + p] - a[r * k + p] * a[p * k + c]) / prev;
            }
            a[r * k + p] = 0;
        }
        prev = a[p * k + p];
    }
    sign * a[(k - 1) * k + (k - 1)]
}

/// TIC translation membership: diag(S) even.
pub fn is_tic_translation(s: &FourierIndex) -> bool {
    (0..s.genus()).all(|i| s.entry(i, i) % 2 == 0)
}

/// TOC translation membership: S*1 + diag(S) even componentwise.
pub fn is_toc_translation(s: &FourierIndex) -> bool {
    let g = s.genus();
    (0..g).all(|i| {
        let row_sum: i64 = (0..g).map(|j| s.entry(i, j)).sum();
        (row_sum + s.entry(i, i)) % 2 == 0
    })
}

/// Generating set of the TOC translation lattice: diagonal units, doubled
/// off-diagonal units, and triple sums E_ij+E_jk+E_ki.
pub fn toc_generators(g: usize) -> Vec<FourierIndex> {
    let mut gens = Vec::new();
    let e = |i: usize, j: usize| {
        let mut n = vec![0i64; g * g];
        n[i * g + j] = 1;
        n[j * g + i] = 1;
        FourierIndex { genus: g, n }
    };
    for i in 0..g {
        let mut d = vec![0i64; g];
        d[i] = 1;
        gens.push(FourierIndex::diag(&d));
    }
    for i in 0..g {
        for j in i + 1..g {
            let mut n = vec![0i64; g * g];
            n[i * g + j] = 2;
            n[j * g + i] = 2;
            gens.push(FourierIndex { genus: g, n });
        }
    }
    for i in 0..g {
        for j in i + 1..g {
            for k in j + 1..g {
                let mut t = e(i, j);
                let t2 = e(j, k);
                let t3 = e(k, i);
                for x in 0..g * g {
                    t.n[x] += t2.n[x] + t3.n[x];
                }
                gens.push(t);
            }
        }
    }
    gens
}

/// F2 rank of the span of the TOC generators inside V_g(Z)/2V_g(Z), checked
/// against the rank of the full congruence-defined lattice.
fn toc_f2_dim(g: usize) -> (usize, usize) {
    let dim_v = g * (g + 1) / 2;
    // basis of V/2V indexed by (i<=j); vector for S = upper triangle mod 2
    let to_bits = |s: &FourierIndex| -> u64 {
        let mut bits = 0u64;
        let mut k = 0;
        for i in 0..g {
            for j in i..g {
                if s.entry(i, j).rem_euclid(2) == 1 {
                    bits |= 1 << k;
                }
                k += 1;
            }
        }
        bits
    };
    let f2_rank = |mut rows: Vec<u64>| -> usize {
        let mut rank = 0;
        for bit in 0..dim_v {
            let piv = rows.iter().position(|&r| r & (1 << bit) != 0);
            if let Some(p) = piv {
                let pr = rows.swap_remove(p);
                for r in rows.iter_mut() {
                    if *r & (1 << bit) != 0 {
                        *r ^= pr;
                    }
                }
                rank += 1;
            }
        }
        rank
    };
    let gen_rank = f2_rank(toc_generators(g).iter().map(to_bits).collect());

    // Full solution space of S*1 + S_0 = 0 over F2: the condition is linear
    // in S mod 2, so compute the rank of the condition map on the unit
    // matrices E_ij.  E_ii maps to zero (row sum and diagonal cancel); E_ij
    // with i<j hits coordinates i and j.
    let mut cond_rows: Vec<u64> = vec![0; g];
    let mut k = 0;
    for i in 0..g {
        for j in i..g {
            if i < j {
                cond_rows[i] |= 1 << k;
                cond_rows[j] |= 1 << k;
            }
            k += 1;
        }
    }
    let cond_rank = f2_rank(cond_rows);
    let kernel_dim = dim_v - cond_rank;
    (gen_rank, kernel_dim)
}

/// Indices ([V_g(Z):L], [L:2V_g(Z)]) of the TOC translation lattice, computed
/// by F2 linear algebra on V/2V.  The generator span is verified to equal the
/// congruence kernel before returning.
pub fn toc_indices(g: usize) -> (Int, Int) {
    let dim_v = g * (g + 1) / 2;
    let (gen_rank, kernel_dim) = toc_f2_dim(g);
    assert_eq!(
        gen_rank, kernel_dim,
        "TOC generators do not span the congruence lattice at genus {g}"
    );
    let idx_vl = Int::from(1) << (dim_v - kernel_dim);
    let idx_l2v = Int::from(1) << kernel_dim;
    (idx_vl, idx_l2v)
}

/// Very even test: <N, S> = tr(N S) divisible by 4 for every TOC generator.
pub fn is_very_even(n: &FourierIndex) -> bool {
    let g = n.genus();
    toc_generators(g).iter().all(|s| {
        let mut tr = 0i64;
        for i in 0..g {
            for j in 0..g {
                tr += n.entry(i, j) * s.entry(j, i);
            }
        }
        tr % 4 == 0
    })
}

/// Minimum of a positive definite integral form over nonzero integer
/// vectors, by complete enumeration bounded by the smallest diagonal entry.
pub fn minimum(n: &FourierIndex) -> Result<i64, QformError> {
    let g = n.genus();
    if g == 0 {
        return Err(QformError::NotDefinite);
    }
    if !n.is_psd() {
        return Err(QformError::NotPositiveSemidefinite);
    }
    if !n.is_positive_definite() {
        return Err(QformError::NotDefinite);
    }
    let bound = (0..g).map(|i| n.entry(i, i)).min().unwrap();
    let mut best = bound;
    enumerate_definite(n, bound, |norm, _| {
        if norm > 0 && norm < best {
            best = norm;
        }
    });
    Ok(best)
}

/// Complete exact enumeration of v with v'Nv <= bound for positive definite
/// N, by rational LDL with integer-sqrt range bounds (no floating point).
fn enumerate_definite(n: &FourierIndex, bound: i64, mut visit: impl FnMut(i64, &[i64])) {
    let g = n.genus();
    // rational LDL: N = U' D U with U unit upper triangular
    let mut a: Vec<Vec<Rational>> = (0..g)
        .map(|i| (0..g).map(|j| rat(n.entry(i, j))).collect())
        .collect();
    let mut d = vec![Rational::zero(); g];
    let mut u: Vec<Vec<Rational>> = vec![vec![Rational::zero(); g]; g];
    for i in 0..g {
        d[i] = a[i][i].clone();
        assert!(d[i].is_positive());
        for j in i + 1..g {
            u[i][j] = &a[i][j] / &d[i];
        }
        for k in i + 1..g {
            for l in k..g {
                let sub = &d[i] * &u[i][k] * &u[i][l];
                a[k][l] -= sub;
            }
        }
    }
    let mut v = vec![0i64; g];
    rec_definite(g as isize - 1, rat(bound), n, &d, &u, &mut v, bound, &mut visit);
}

fn rec_definite(
    i: isize,
    rem: Rational,
    n: &FourierIndex,
    d: &[Rational],
    u: &[Vec<Rational>],
    v: &mut Vec<i64>,
    bound: i64,
    visit: &mut impl FnMut(i64, &[i64]),
) {
    if rem.is_negative() {
        return;
    }
    if i < 0 {
        let g = n.genus();
        let mut norm = 0i64;
        for r in 0..g {
            for c in 0..g {
                norm += n.entry(r, c) * v[r] * v[c];
            }
        }
        if norm <= bound {
            visit(norm, v);
        }
        return;
    }
    let g = n.genus();
    let i = i as usize;
    let mut c = Rational::zero();
    for j in i + 1..g {
        c += &u[i][j] * rat(v[j]);
    }
    // |v_i + c| <= sqrt(rem / d_i)
    let bound_sq = &rem / &d[i];
    let r = floor_sqrt(&bound_sq);
    let r = Rational::from_integer(r + Int::from(1)); // widen: isqrt flooring
    let lo = (&(-&c) - &r).ceil().to_integer().to_i64().unwrap();
    let hi = (&(-&c) + &r).floor().to_integer().to_i64().unwrap();
    for t in lo..=hi {
        v[i] = t;
        let diff = rat(t) + c.clone();
        let used = &d[i] * &diff * &diff;
        rec_definite(i as isize - 1, &rem - &used, n, d, u, v, bound, visit);
    }
    v[i] = 0;
}

/// Exact dyadic-trace certificate: an optimal dyadic representation of
/// T = N/2-scale rational form, together with the dual form u.
#[derive(Clone, Debug)]
pub struct DyadicCertificate {
    /// w(T)
    pub value: Rational,
    /// (weight alpha_i, vector v_i) pairs with sum alpha_i v_i v_i' = T
    pub representation: Vec<(Rational, Vec<i64>)>,
    /// dual form u (row-major symmetric matrix) with <u,T> = value, m(u) >= 1
    pub dual_form: Vec<Rational>,
}

/// Rational symmetric positive definite input matrix for the dyadic trace.
#[derive(Clone, Debug)]
pub struct RationalForm {
    pub genus: usize,
    /// row-major symmetric entries
    pub entries: Vec<Rational>,
}

impl RationalForm {
    pub fn new(genus: usize, entries: Vec<Rational>) -> Self {
        assert_eq!(entries.len(), genus * genus);
        for i in 0..genus {
            for j in 0..i {
                assert_eq!(entries[i * genus + j], entries[j * genus + i], "not symmetric");
            }
        }
        RationalForm { genus, entries }
    }

    pub fn from_index_halved(n: &FourierIndex) -> Self {
        let g = n.genus();
        RationalForm::new(
            g,
            n.entries().iter().map(|&x| rat(x) / rat(2)).collect(),
        )
    }

    pub fn from_integer(n: &FourierIndex) -> Self {
        RationalForm::new(n.genus(), n.entries().iter().map(|&x| rat(x)).collect())
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.genus + j]
    }

    pub fn trace(&self) -> Rational {
        (0..self.genus).fold(Rational::zero(), |acc, i| acc + self.entry(i, i))
    }

    /// Clears denominators: returns (d, N) with N = d*T integral.
    pub fn scaled_integral(&self) -> (Int, FourierIndex) {
        let mut den = Int::from(1);
        for x in &self.entries {
            den = num_integer::lcm(den, x.denom().clone());
        }
        let d = Rational::from_integer(den.clone());
        let n: Vec<i64> = self
            .entries
            .iter()
            .map(|x| (x * &d).to_integer().to_i64().expect("scaled entry fits i64"))
            .collect();
        (den, FourierIndex { genus: self.genus, n })
    }

    pub fn block_sum(&self, other: &RationalForm) -> RationalForm {
        let g1 = self.genus;
        let g2 = other.genus;
        let g = g1 + g2;
        let mut e = vec![Rational::zero(); g * g];
        for i in 0..g1 {
            for j in 0..g1 {
                e[i * g + j] = self.entry(i, j).clone();
            }
        }
        for i in 0..g2 {
            for j in 0..g2 {
                e[(g1 + i) * g + (g1 + j)] = other.entry(i, j).clone();
            }
        }
        RationalForm { genus: g, entries: e }
    }

    pub fn is_positive_definite(&self) -> bool {
        let m = ExactMatrix::from_rows(
            (0..self.genus)
                .map(|i| (0..self.genus).map(|j| self.entry(i, j).clone()).collect())
                .collect(),
        );
        (1..=self.genus).all(|k| {
            let sub = ExactMatrix::from_rows(
                (0..k).map(|i| (0..k).map(|j| m[(i, j)].clone()).collect()).collect(),
            );
            sub.det().map(|d| d.is_positive()).unwrap_or(false)
        })
    }
}

/// Minimum of a rational positive definite form: m(T) = m(dT)/d.
pub fn rational_minimum(t: &RationalForm) -> Result<Rational, QformError> {
    let (den, scaled) = t.scaled_integral();
    let m = minimum(&scaled)?;
    Ok(rat(m) / Rational::from_integer(den))
}

/// Certified exact dyadic trace w(T) for rational positive definite T.
///
/// Solves the weight-maximization LP over candidate vectors v with
/// v'Tv <= ceil(tr T), doubling the bound whenever the dual certificate
/// fails the global test m(u) >= 1.
pub fn dyadic_trace(t: &RationalForm) -> Result<DyadicCertificate, QformError> {
    let g = t.genus;
    if g == 0 || !t.is_positive_definite() {
        return Err(QformError::NotDefinite);
    }
    let mut bound = {
        let tr = t.trace();
        tr.ceil().to_integer().to_i64().unwrap().max(1)
    };
    let (den, scaled) = t.scaled_integral();
    let den_i64 = den.to_i64().expect("denominator fits i64");

    for _attempt in 0..12 {
        // candidate vectors: v'Tv <= bound, one representative per +-v pair
        let mut cands: Vec<Vec<i64>> = Vec::new();
        enumerate_definite(&scaled, bound * den_i64, |norm, v| {
            if norm > 0 {
                if let Some(first) = v.iter().find(|&&x| x != 0) {
                    if *first > 0 {
                        cands.push(v.to_vec());
                    }
                }
            }
        });
        cands.sort_unstable();

        // LP rows indexed by (i<=j): sum_v alpha_v (vv')_{ij} = T_{ij}
        let nrows = g * (g + 1) / 2;
        let mut columns = Vec::with_capacity(cands.len());
        for v in &cands {
            let mut col = Vec::with_capacity(nrows);
            for i in 0..g {
                for j in i..g {
                    col.push(rat(v[i] * v[j]));
                }
            }
            columns.push(col);
        }
        let mut rhs = Vec::with_capacity(nrows);
        for i in 0..g {
            for j in i..g {
                rhs.push(t.entry(i, j).clone());
            }
        }
        let lp = LpProblem::sum_objective(columns, rhs);
        let sol = match simplex_max(&lp) {
            Ok(s) => s,
            Err(_) => {
                bound *= 2;
                continue;
            }
        };

        // dual form u from the dual vector y: u_ii = y_ii, u_ij = y_ij/2
        let mut u = vec![Rational::zero(); g * g];
        let mut k = 0;
        for i in 0..g {
            for j in i..g {
                if i == j {
                    u[i * g + i] = sol.dual[k].clone();
                } else {
                    let half = &sol.dual[k] / rat(2);
                    u[i * g + j] = half.clone();
                    u[j * g + i] = half;
                }
                k += 1;
            }
        }
        let uform = RationalForm::new(g, u.clone());

        // global certificate: m(u) >= 1 (requires u positive definite)
        if uform.is_positive_definite() {
            if let Ok(mu) = rational_minimum(&uform) {
                if mu >= rat(1) {
                    // assemble certificate and verify all invariants exactly
                    let mut representation = Vec::new();
                    for (v, alpha) in cands.iter().zip(sol.primal.iter()) {
                        if alpha.is_positive() {
                            representation.push((alpha.clone(), v.clone()));
                        }
                    }
                    verify_certificate(t, &sol.value, &representation, &uform)?;
                    return Ok(DyadicCertificate {
                        value: sol.value,
                        representation,
                        dual_form: u,
                    });
                }
            }
        }
        bound *= 2;
    }
    Err(QformError::Certification(
        "candidate bound doubling did not certify".into(),
    ))
}

fn verify_certificate(
    t: &RationalForm,
    value: &Rational,
    rep: &[(Rational, Vec<i64>)],
    u: &RationalForm,
) -> Result<(), QformError> {
    let g = t.genus;
    // sum alpha v v' = T exactly
    for i in 0..g {
        for j in 0..g {
            let s: Rational = rep
                .iter()
                .map(|(a, v)| a * rat(v[i] * v[j]))
                .fold(Rational::zero(), |acc, x| acc + x);
            if s != *t.entry(i, j) {
                return Err(QformError::Certification(format!(
                    "representation mismatch at ({i},{j})"
                )));
            }
        }
    }
    // sum alpha = value
    let total: Rational = rep.iter().map(|(a, _)| a.clone()).fold(Rational::zero(), |acc, x| acc + x);
    if total != *value {
        return Err(QformError::Certification("weight sum differs from value".into()));
    }
    // <u, T> = value
    let mut tr = Rational::zero();
    for i in 0..g {
        for j in 0..g {
            tr += u.entry(i, j) * t.entry(j, i);
        }
    }
    if tr != *value {
        return Err(QformError::Certification("dual pairing differs from value".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    pub(crate) const D4_GRAM: [i64; 16] = [2, -1, 0, 0, -1, 2, -1, -1, 0, -1, 2, 0, 0, -1, 0, 2];

    fn d4() -> FourierIndex {
        FourierIndex::new(4, D4_GRAM.to_vec()).unwrap()
    }

    #[test]
    fn minimum_of_identity_is_one() {
        for g in 1..=5 {
            let n = FourierIndex::diag(&vec![1; g]);
            assert_eq!(minimum(&n).unwrap(), 1);
        }
    }

    /// Brute-force oracle over the box [-3,3]^4.
    #[test]
    fn minimum_of_d4_is_two() {
        let n = d4();
        let mut best = i64::MAX;
        let r = 3i64;
        for a in -r..=r {
            for b in -r..=r {
                for c in -r..=r {
                    for d in -r..=r {
                        let v = [a, b, c, d];
                        if v == [0; 4] {
                            continue;
                        }
                        let mut norm = 0;
                        for i in 0..4 {
                            for j in 0..4 {
                                norm += D4_GRAM[i * 4 + j] * v[i] * v[j];
                            }
                        }
                        best = best.min(norm);
                    }
                }
            }
        }
        assert_eq!(best, 2);
        assert_eq!(minimum(&n).unwrap(), 2);
    }

    #[test]
    fn minimum_scales_linearly() {
        let n = FourierIndex::diag(&[2, 2, 2]);
        assert_eq!(minimum(&n).unwrap(), 2);
        let m = FourierIndex::diag(&[6, 6, 6]);
        assert_eq!(minimum(&m).unwrap(), 6);
    }

    #[test]
    fn minimum_rejects_singular_semidefinite() {
        let n = FourierIndex::diag(&[1, 0]);
        assert_eq!(minimum(&n).unwrap_err(), QformError::NotDefinite);
        let neg = FourierIndex::diag(&[1, -1]);
        assert_eq!(minimum(&neg).unwrap_err(), QformError::NotPositiveSemidefinite);
    }

    #[test]
    fn psd_checks_all_principal_minors() {
        // leading minors are all >= 0 but the form is indefinite
        let n = FourierIndex::new(2, vec![0, 0, 0, -1]).unwrap();
        assert!(!n.is_psd());
        assert!(FourierIndex::diag(&[0, 1]).is_psd());
        assert!(d4().is_psd());
    }

    #[test]
    fn tic_translation_examples() {
        let mut e11 = FourierIndex::zero(3);
        e11.n[0] = 2;
        assert!(is_tic_translation(&e11));
        let mut odd = FourierIndex::zero(3);
        odd.n[0] = 1;
        assert!(!is_tic_translation(&odd));
        // zero diagonal, odd off-diagonal
        let s = FourierIndex::new(2, vec![0, 1, 1, 0]).unwrap();
        assert!(is_tic_translation(&s));
    }

    #[test]
    fn toc_translation_examples() {
        // 2 V_g(Z)
        let s = FourierIndex::new(2, vec![2, 4, 4,6]).unwrap();
        assert!(is_toc_translation(&s));
        // diagonal matrices
        assert!(is_toc_translation(&FourierIndex::diag(&[1, 3, 5])));
        // E12 + E23 + E31
        let t = FourierIndex::new(3, vec![0, 1, 1, 1, 0, 1, 1, 1, 0]).unwrap();
        assert!(is_toc_translation(&t));
        // E12 alone is not (row sum odd)
        let e12 = FourierIndex::new(2, vec![0, 1, 1, 0]).unwrap();
        assert!(!is_toc_translation(&e12));
    }

    #[test]
    fn toc_generators_satisfy_membership() {
        for g in 1..=5 {
            for s in toc_generators(g) {
                assert!(is_toc_translation(&s), "{s:?}");
            }
        }
    }

    #[test]
    fn toc_indices_match_closed_form() {
        for g in 1..=4usize {
            let (a, b) = toc_indices(g);
            assert_eq!(a, Int::from(1) << (g - 1), "V:L at {g}");
            assert_eq!(b, Int::from(1) << (1 + g * (g - 1) / 2), "L:2V at {g}");
            // product consistency
            assert_eq!(a * b, Int::from(1) << (g * (g + 1) / 2));
        }
    }

    #[test]
    fn very_even_examples() {
        for g in 1..=4 {
            assert!(is_very_even(&FourierIndex::diag(&vec![4; g])));
            assert!(!is_very_even(&FourierIndex::diag(&vec![2; g])));
        }
        // diagonals of very even forms are multiples of 4
        let n = FourierIndex::new(2, vec![4, 2, 2, 4]).unwrap();
        assert!(is_very_even(&n));
        let m = FourierIndex::new(2, vec![4, 1, 1, 4]).unwrap();
        assert!(!is_very_even(&m)); // triple/diag conditions hold but 2*1 = 2 mod 4
    }

    #[test]
    fn dyadic_trace_of_identity_is_g() {
        for g in 1..=4usize {
            let t = RationalForm::from_integer(&FourierIndex::diag(&vec![1; g as i64 as usize]));
            let cert = dyadic_trace(&t).unwrap();
            assert_eq!(cert.value, rat(g as i64), "genus {g}");
            // dual u must have m(u) >= 1: for the identity u = I works
            let uform = RationalForm::new(g, cert.dual_form.clone());
            assert!(rational_minimum(&uform).unwrap() >= rat(1));
        }
    }

    #[test]
    fn dyadic_trace_is_homogeneous() {
        let t = RationalForm::from_integer(&FourierIndex::new(2, vec![2, 1, 1, 2]).unwrap());
        let w = dyadic_trace(&t).unwrap().value;
        let t3 = RationalForm::new(
            2,
            t.entries.iter().map(|x| x * rat(3)).collect(),
        );
        assert_eq!(dyadic_trace(&t3).unwrap().value, w * rat(3));
    }

    #[test]
    fn dyadic_trace_block_additivity_and_strict_subadditivity() {
        let t1 = RationalForm::new(1, vec![ratio(3, 2)]);
        let t2 = RationalForm::new(2, vec![rat(2), ratio(1, 2), ratio(1, 2), rat(1)]);
        let w1 = dyadic_trace(&t1).unwrap().value;
        let w2 = dyadic_trace(&t2).unwrap().value;
        let block = t1.block_sum(&t2);
        assert_eq!(dyadic_trace(&block).unwrap().value, w1.clone() + w2.clone());

        // nonzero off-block coupling must be strictly subadditive
        let mut coupled = block.clone();
        coupled.entries[1] = ratio(1, 2);
        coupled.entries[3] = ratio(1, 2);
        let coupled = RationalForm::new(3, coupled.entries);
        assert!(coupled.is_positive_definite());
        let wc = dyadic_trace(&coupled).unwrap().value;
        assert!(wc < w1 + w2);
    }

    #[test]
    fn dyadic_trace_invariant_under_unimodular_change() {
        let n = FourierIndex::new(2, vec![2, 1, 1, 4]).unwrap();
        let t = RationalForm::from_index_halved(&n);
        let w = dyadic_trace(&t).unwrap().value;
        // U = [[1,1],[0,1]]
        let nu = n.conjugate(&[1, 1, 0, 1]);
        let tu = RationalForm::from_index_halved(&nu);
        assert_eq!(dyadic_trace(&tu).unwrap().value, w);
        assert_eq!(minimum(&n).unwrap(), minimum(&nu).unwrap());
    }

    #[test]
    fn minimum_superadditive_on_sums() {
        // m(s1+s2) >= m(s1)+m(s2) on positive definite pairs
        let pairs = [
            (FourierIndex::diag(&[1, 2]), FourierIndex::new(2, vec![2, 1, 1, 2]).unwrap()),
            (FourierIndex::diag(&[3, 1]), FourierIndex::diag(&[1, 1])),
        ];
        for (a, b) in pairs {
            let mut sum = a.clone();
            for k in 0..sum.n.len() {
                sum.n[k] += b.n[k];
            }
            assert!(minimum(&sum).unwrap() >= minimum(&a).unwrap() + minimum(&b).unwrap());
        }
    }

    #[test]
    fn fourier_index_round_trips_upper_triangle() {
        let n = d4();
        let up = n.upper_triangle();
        assert_eq!(FourierIndex::from_upper(4, &up).unwrap(), n);
    }

    #[test]
    fn d4_oracle_in_dyadic_scale() {
        // w(D4/2): the D4 form at T-scale has dyadic trace 2 = g/2 * ...
        // verified against the homogeneity relation w(N/2) = w(N)/2.
        let n = d4();
        let w_full = dyadic_trace(&RationalForm::from_integer(&n)).unwrap().value;
        let w_half = dyadic_trace(&RationalForm::from_index_halved(&n)).unwrap().value;
        assert_eq!(w_half * rat(2), w_full);
    }
}
