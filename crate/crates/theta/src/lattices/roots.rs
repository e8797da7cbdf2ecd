//! Construction of the root components and the glued catalog lattices.
//!
//! Gluing works on generator rows scaled by 4 (the largest coordinate
//! denominator in the catalog), stacking base and glue rows and taking the
//! canonical Hermite normal form over Z.  The HNF is unique for a given
//! lattice, so re-gluing an already included vector reproduces the same
//! generator matrix.

use super::{LatticeBasis, LatticeId};
use crate::exact::{rat, ratio, ExactMatrix, Int, Rational};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GlueError {
    #[error("glue vector {index} has non-integral pairing with basis row {row}: {value}")]
    NonIntegralPairing { index: usize, row: usize, value: String },
    #[error("glue vector {index} has non-integral norm {value} modulo the lattice")]
    NonIntegralNorm { index: usize, value: String },
    #[error("glue vectors {i} and {j} have non-integral pairing {value}")]
    NonIntegralCross { i: usize, j: usize, value: String },
    #[error("ambient dimension mismatch: base has {base}, glue vector {index} has {got}")]
    Dimension { base: usize, index: usize, got: usize },
}

/// Z^n in its standard coordinates.
fn z_generator(n: usize) -> ExactMatrix {
    ExactMatrix::identity(n)
}

/// D_n: integer vectors with even coordinate sum.
/// Rows: e_i - e_{i+1} for i < n-1, then e_{n-1} + e_n.
fn d_generator(n: usize) -> ExactMatrix {
    assert!(n >= 2);
    let mut rows = Vec::with_capacity(n);
    for i in 0..n - 1 {
        let mut r = vec![rat(0); n];
        r[i] = rat(1);
        r[i + 1] = rat(-1);
        rows.push(r);
    }
    let mut r = vec![rat(0); n];
    r[n - 2] = rat(1);
    r[n - 1] = rat(1);
    rows.push(r);
    ExactMatrix::from_rows(rows)
}

/// A_n: sum-zero integer vectors in R^{n+1}.  Rows: e_i - e_{i+1}.
fn a_generator(n: usize) -> ExactMatrix {
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut r = vec![rat(0); n + 1];
        r[i] = rat(1);
        r[i + 1] = rat(-1);
        rows.push(r);
    }
    ExactMatrix::from_rows(rows)
}

/// Block direct sum of generator matrices (ambient dimensions concatenate).
fn direct_sum(parts: &[ExactMatrix]) -> ExactMatrix {
    let rows: usize = parts.iter().map(|m| m.rows()).sum();
    let cols: usize = parts.iter().map(|m| m.cols()).sum();
    let mut out = ExactMatrix::zero(rows, cols);
    let (mut ro, mut co) = (0, 0);
    for m in parts {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out[(ro + i, co + j)] = m[(i, j)].clone();
            }
        }
        ro += m.rows();
        co += m.cols();
    }
    out
}

/// Canonical row Hermite normal form over Z; returns the nonzero rows.
fn hnf(mut m: Vec<Vec<Int>>) -> Vec<Vec<Int>> {
    let rows = m.len();
    if rows == 0 {
        return m;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        if (r..rows).all(|i| m[i][c].is_zero()) {
            continue;
        }
        // gcd elimination within column c
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if !m[i][c].is_zero()
                    && best.map_or(true, |b| m[i][c].abs() < m[b][c].abs())
                {
                    best = Some(i);
                }
            }
            let b = best.unwrap();
            m.swap(r, b);
            let mut done = true;
            for i in r + 1..rows {
                if !m[i][c].is_zero() {
                    let q = m[i][c].div_floor(&m[r][c]);
                    if !q.is_zero() {
                        for j in 0..cols {
                            let sub = &q * &m[r][j];
                            m[i][j] -= sub;
                        }
                    }
                    if !m[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[r][c].is_negative() {
            for j in 0..cols {
                m[r][j] = -m[r][j].clone();
            }
        }
        // canonical reduction of the rows above the pivot
        for i in 0..r {
            let q = m[i][c].div_floor(&m[r][c]);
            if !q.is_zero() {
                for j in 0..cols {
                    let sub = &q * &m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

const GLUE_DENOM: i64 = 4;

/// Extends `base` by the given glue vectors (coset representatives in the
/// dual): returns the generated overlattice with the same rank.
///
/// Rejected with a diagnostic if a glue vector pairs non-integrally with the
/// base (not in the dual), if its self-pairing is non-integral mod the
/// lattice (the overlattice would not be integral), or if two glue vectors
/// pair non-integrally.
pub fn glue(base: &LatticeBasis, glue_vectors: &[Vec<Rational>]) -> Result<LatticeBasis, GlueError> {
    let ambient = base.generator.cols();
    for (k, g) in glue_vectors.iter().enumerate() {
        if g.len() != ambient {
            return Err(GlueError::Dimension { base: ambient, index: k, got: g.len() });
        }
        for i in 0..base.rank {
            let p: Rational = base
                .generator
                .row(i)
                .iter()
                .zip(g.iter())
                .map(|(a, b)| a * b)
                .fold(Rational::zero(), |acc, x| acc + x);
            if !p.is_integer() {
                return Err(GlueError::NonIntegralPairing {
                    index: k,
                    row: i,
                    value: p.to_string(),
                });
            }
        }
        let norm: Rational = g.iter().map(|x| x * x).fold(Rational::zero(), |acc, x| acc + x);
        if !norm.is_integer() {
            return Err(GlueError::NonIntegralNorm { index: k, value: norm.to_string() });
        }
        for (j, h) in glue_vectors.iter().enumerate().take(k) {
            let p: Rational = g.iter().zip(h.iter()).map(|(a, b)| a * b).fold(Rational::zero(), |acc, x| acc + x);
            if !p.is_integer() {
                return Err(GlueError::NonIntegralCross { i: j, j: k, value: p.to_string() });
            }
        }
    }

    let scale = rat(GLUE_DENOM);
    let mut rows: Vec<Vec<Int>> = Vec::with_capacity(base.rank + glue_vectors.len());
    for i in 0..base.rank {
        rows.push(
            base.generator
                .row(i)
                .iter()
                .map(|x| {
                    let s = x * &scale;
                    assert!(s.is_integer(), "coordinate denominator exceeds {GLUE_DENOM}");
                    s.to_integer()
                })
                .collect(),
        );
    }
    for g in glue_vectors {
        rows.push(
            g.iter()
                .map(|x| {
                    let s = x * &scale;
                    assert!(s.is_integer(), "glue denominator exceeds {GLUE_DENOM}");
                    s.to_integer()
                })
                .collect(),
        );
    }
    let h = hnf(rows);
    assert_eq!(h.len(), base.rank, "gluing must preserve the rank");
    let gen = ExactMatrix::from_rows(
        h.into_iter()
            .map(|r| r.into_iter().map(|x| Rational::new(x, Int::from(GLUE_DENOM))).collect())
            .collect(),
    );
    Ok(LatticeBasis::from_generator(base.id, gen))
}

/// Builds a root component lattice.
pub fn build_component(id: LatticeId) -> LatticeBasis {
    match id {
        LatticeId::Z(n) => LatticeBasis::from_generator(id, z_generator(n as usize)),
        LatticeId::D(n) => LatticeBasis::from_generator(id, d_generator(n as usize)),
        LatticeId::A(n) => LatticeBasis::from_generator(id, a_generator(n as usize)),
        // E8 = D8 glued with the all-halves class.
        LatticeId::E8 => {
            let d8 = LatticeBasis::from_generator(id, d_generator(8));
            glue(&d8, &[vec![ratio(1, 2); 8]]).expect("E8 glue")
        }
        // E7 = A7 glued with the order-2 class (1/2^4, -1/2^4); 126 roots,
        // determinant 2, realized in the sum-zero hyperplane of R^8.
        LatticeId::E7 => {
            let a7 = LatticeBasis::from_generator(id, a_generator(7));
            let mut g = vec![ratio(1, 2); 4];
            g.extend(vec![ratio(-1, 2); 4]);
            glue(&a7, &[g]).expect("E7 glue")
        }
        LatticeId::L(i) => build_catalog_lattice(i),
    }
}

/// Builds one of the eight self-dual rank-16 lattices.
///
/// Constructions (glue words follow the usual conventions for the discriminant
/// groups of the root components; `[i]` for A_{n} is j coordinates of
/// i/(n+1) followed by i coordinates of -j/(n+1) with i+j = n+1):
/// - L0 = (D8+D8)+  glued by [1]x[2] and [2]x[1]
/// - L1 = Z + A15+  glued by [4] = (1/4)^12 (-3/4)^4
/// - L2 = Z^2 + (E7+E7)+  glued by [1]x[1] = ((1/4)^6 (-3/4)^2)^2
/// - L3 = Z^4 + D12+  glued by [1] = (1/2)^12
/// - L4 = Z^8 + E8
/// - L5 = Z^16
/// - L6 = E8 + E8
/// - L7 = D16+  glued by [1] = (1/2)^16
pub fn build_catalog_lattice(i: u8) -> LatticeBasis {
    let id = LatticeId::L(i);
    match i {
        0 => {
            let base = LatticeBasis::from_generator(
                id,
                direct_sum(&[d_generator(8), d_generator(8)]),
            );
            let mut g12 = vec![ratio(1, 2); 8];
            g12.extend(vec![rat(0); 7]);
            g12.push(rat(1));
            let mut g21 = vec![rat(0); 7];
            g21.push(rat(1));
            g21.extend(vec![ratio(1, 2); 8]);
            glue(&base, &[g12, g21]).expect("L0 glue")
        }
        1 => {
            let a15 = LatticeBasis::from_generator(id, a_generator(15));
            let mut g = vec![ratio(1, 4); 12];
            g.extend(vec![ratio(-3, 4); 4]);
            let a15p = glue(&a15, &[g]).expect("A15+ glue");
            LatticeBasis::from_generator(id, direct_sum(&[z_generator(1), a15p.generator]))
        }
        2 => {
            let e7 = build_component(LatticeId::E7);
            let base = LatticeBasis::from_generator(
                id,
                direct_sum(&[e7.generator.clone(), e7.generator]),
            );
            let mut g = vec![ratio(1, 4); 6];
            g.extend(vec![ratio(-3, 4); 2]);
            let mut g11 = g.clone();
            g11.extend(g);
            let e7e7p = glue(&base, &[g11]).expect("(E7+E7)+ glue");
            LatticeBasis::from_generator(id, direct_sum(&[z_generator(2), e7e7p.generator]))
        }
        3 => {
            let d12 = LatticeBasis::from_generator(id, d_generator(12));
            let d12p = glue(&d12, &[vec![ratio(1, 2); 12]]).expect("D12+ glue");
            LatticeBasis::from_generator(id, direct_sum(&[z_generator(4), d12p.generator]))
        }
        4 => {
            let e8 = build_component(LatticeId::E8);
            LatticeBasis::from_generator(id, direct_sum(&[z_generator(8), e8.generator]))
        }
        5 => LatticeBasis::from_generator(id, z_generator(16)),
        6 => {
            let e8 = build_component(LatticeId::E8);
            LatticeBasis::from_generator(id, direct_sum(&[e8.generator.clone(), e8.generator]))
        }
        7 => {
            let d16 = LatticeBasis::from_generator(id, d_generator(16));
            glue(&d16, &[vec![ratio(1, 2); 16]]).expect("D16+ glue")
        }
        _ => panic!("catalog index out of range: {i}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d16_plus_has_determinant_one() {
        let d16 = build_component(LatticeId::D(16));
        assert_eq!(d16.gram_det(), rat(4));
        let d16p = glue(&d16, &[vec![ratio(1, 2); 16]]).unwrap();
        assert_eq!(d16p.gram_det(), rat(1));
        assert!(d16p.is_even());
    }

    #[test]
    fn a15_plus_has_index_four() {
        let a15 = build_component(LatticeId::A(15));
        assert_eq!(a15.gram_det(), rat(16));
        let mut g = vec![ratio(1, 4); 12];
        g.extend(vec![ratio(-3, 4); 4]);
        let a15p = glue(&a15, &[g]).unwrap();
        // index 4: det drops by 4^2
        assert_eq!(a15p.gram_det(), rat(1));
    }

    #[test]
    fn e7e7_plus_is_unimodular() {
        let e7 = build_component(LatticeId::E7);
        let base = LatticeBasis::from_generator(
            LatticeId::E7,
            direct_sum(&[e7.generator.clone(), e7.generator]),
        );
        assert_eq!(base.gram_det(), rat(4));
        let mut g = vec![ratio(1, 4); 6];
        g.extend(vec![ratio(-3, 4); 2]);
        let mut g11 = g.clone();
        g11.extend(g);
        let plus = glue(&base, &[g11]).unwrap();
        assert_eq!(plus.gram_det(), rat(1));
    }

    #[test]
    fn regluing_is_idempotent() {
        let d16 = build_component(LatticeId::D(16));
        let v = vec![ratio(1, 2); 16];
        let once = glue(&d16, &[v.clone()]).unwrap();
        let twice = glue(&once, &[v]).unwrap();
        assert_eq!(once.generator, twice.generator);
        assert_eq!(once.gram, twice.gram);
    }

    #[test]
    fn non_integral_self_pairing_is_rejected() {
        // D10 with the all-halves vector: norm 10/4 is not integral
        let d10 = build_component(LatticeId::D(10));
        let err = glue(&d10, &[vec![ratio(1, 2); 10]]).unwrap_err();
        assert!(matches!(err, GlueError::NonIntegralNorm { .. }));
    }

    #[test]
    fn non_dual_glue_is_rejected() {
        // (1/3, ...) does not pair integrally with Z^2
        let z2 = build_component(LatticeId::Z(2));
        let err = glue(&z2, &[vec![ratio(1, 3), rat(0)]]).unwrap_err();
        assert!(matches!(err, GlueError::NonIntegralPairing { .. }));
    }
}
