//! Dense matrices over the exact rationals: determinants, inverses, linear
//! solves and rank, all by rational Gaussian elimination.

use super::{rat, Rational};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("operation requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular (rank {rank} < {need})")]
    Singular { rank: usize, need: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Row-major dense matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        ExactMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Rational>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        assert!(cols.iter().all(|x| x.len() == r), "ragged columns");
        let mut m = Self::zero(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in mul");
        let mut out = Self::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a * &rhs[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    /// Exact determinant by rational Gaussian elimination with row pivoting.
    pub fn det(&self) -> Result<Rational, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let pivot = match (c..n).find(|&r| !a[(r, c)].is_zero()) {
                Some(p) => p,
                None => return Ok(Rational::zero()),
            };
            if pivot != c {
                a.swap_rows(pivot, c);
                det = -det;
            }
            det *= a[(c, c)].clone();
            let inv = a[(c, c)].recip();
            for r in c + 1..n {
                if a[(r, c)].is_zero() {
                    continue;
                }
                let f = &a[(r, c)] * &inv;
                for j in c..n {
                    let sub = &f * &a[(c, j)];
                    a[(r, j)] -= sub;
                }
            }
        }
        Ok(det)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let pivot = match (r..a.rows).find(|&i| !a[(i, c)].is_zero()) {
                Some(p) => p,
                None => continue,
            };
            a.swap_rows(pivot, r);
            let inv = a[(r, c)].recip();
            for i in r + 1..a.rows {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let f = &a[(i, c)] * &inv;
                for j in c..a.cols {
                    let sub = &f * &a[(r, j)];
                    a[(i, j)] -= sub;
                }
            }
            r += 1;
        }
        r
    }

    /// Solve `self * x = b` for square invertible `self`; `b` has one column
    /// per right-hand side.
    pub fn solve(&self, b: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        if b.rows != self.rows {
            return Err(MatrixError::Dimension(format!(
                "rhs has {} rows, matrix has {}",
                b.rows, self.rows
            )));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut x = b.clone();
        for c in 0..n {
            let pivot = (c..n)
                .find(|&r| !a[(r, c)].is_zero())
                .ok_or(MatrixError::Singular { rank: c, need: n })?;
            a.swap_rows(pivot, c);
            x.swap_rows(pivot, c);
            let inv = a[(c, c)].recip();
            for j in c..n {
                a[(c, j)] = &a[(c, j)] * &inv;
            }
            for j in 0..x.cols {
                x[(c, j)] = &x[(c, j)] * &inv;
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for j in c..n {
                    let sub = &f * &a[(c, j)];
                    a[(r, j)] -= sub;
                }
                for j in 0..x.cols {
                    let sub = &f * &x[(c, j)];
                    x[(r, j)] -= sub;
                }
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<ExactMatrix, MatrixError> {
        self.solve(&ExactMatrix::identity(self.rows))
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Dual basis of a set of n independent n-vectors: returns `w_0..w_{n-1}`
/// with `w_j . v_k = delta_{jk}` exactly.
pub fn solve_dual_basis(vectors: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>, MatrixError> {
    let n = vectors.len();
    if vectors.iter().any(|v| v.len() != n) {
        return Err(MatrixError::Dimension(format!("need {n} vectors of length {n}")));
    }
    // Columns of m are the given vectors; rows of m^{-1} are the duals.
    let m = ExactMatrix::from_columns(vectors);
    let inv = m.inverse()?;
    Ok((0..n).map(|j| inv.row(j).to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::super::{rat, ratio};
    use super::*;

    #[test]
    fn det_identity_6x6_is_one() {
        assert_eq!(ExactMatrix::identity(6).det().unwrap(), rat(1));
    }

    #[test]
    fn det_repeated_row_is_zero() {
        let m = ExactMatrix::from_i64_rows(&[
            vec![1, 2, 3],
            vec![4, 5, 6],
            vec![1, 2, 3],
        ]);
        assert_eq!(m.det().unwrap(), rat(0));
    }

    #[test]
    fn det_rejects_non_square() {
        let m = ExactMatrix::zero(2, 3);
        assert!(matches!(m.det(), Err(MatrixError::NotSquare { .. })));
    }

    /// Vandermonde on the nodes (0,2,4,8,16,32): determinant equals the
    /// product of node differences, computed here independently.
    #[test]
    fn det_vandermonde_matches_product_formula() {
        let nodes: [i64; 6] = [0, 2, 4, 8, 16, 32];
        let m = ExactMatrix::from_rows(
            nodes
                .iter()
                .map(|&x| (0..6).map(|j| rat(x.pow(j))).collect())
                .collect(),
        );
        let mut prod = rat(1);
        for i in 0..6 {
            for j in i + 1..6 {
                prod *= rat(nodes[j] - nodes[i]);
            }
        }
        let det = m.det().unwrap();
        assert_eq!(det, prod);
        assert_eq!(det, rat(681_869_007_912_960));
    }

    #[test]
    fn det_is_multiplicative_on_random_matrices() {
        // fixed small pseudo-random matrices
        let mut seed = 9_871u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 11) as i64 - 5
        };
        for _ in 0..20 {
            let a = ExactMatrix::from_i64_rows(&(0..4)
                .map(|_| (0..4).map(|_| next()).collect())
                .collect::<Vec<_>>());
            let b = ExactMatrix::from_i64_rows(&(0..4)
                .map(|_| (0..4).map(|_| next()).collect())
                .collect::<Vec<_>>());
            assert_eq!(
                a.mul(&b).det().unwrap(),
                a.det().unwrap() * b.det().unwrap()
            );
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = ExactMatrix::from_i64_rows(&[
            vec![2, 1, 0],
            vec![1, 3, 1],
            vec![0, 1, 4],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), ExactMatrix::identity(3));
    }

    #[test]
    fn dual_basis_standard_is_standard() {
        let std: Vec<Vec<Rational>> = (0..4)
            .map(|i| (0..4).map(|j| rat((i == j) as i64)).collect())
            .collect();
        assert_eq!(solve_dual_basis(&std).unwrap(), std);
    }

    #[test]
    fn dual_basis_scaling_halves_duals() {
        let base: Vec<Vec<Rational>> = (0..3)
            .map(|i| (0..3).map(|j| rat(2 * ((i == j) as i64))).collect())
            .collect();
        let duals = solve_dual_basis(&base).unwrap();
        for (j, d) in duals.iter().enumerate() {
            for (k, x) in d.iter().enumerate() {
                assert_eq!(*x, if j == k { ratio(1, 2) } else { rat(0) });
            }
        }
    }

    #[test]
    fn dual_basis_rejects_singular() {
        let vecs = vec![
            vec![rat(1), rat(0)],
            vec![rat(2), rat(0)],
        ];
        assert!(matches!(solve_dual_basis(&vecs), Err(MatrixError::Singular { .. })));
    }

    #[test]
    fn rank_of_rank_deficient_matrix() {
        let m = ExactMatrix::from_i64_rows(&[
            vec![1, 2, 3],
            vec![2, 4, 6],
            vec![0, 1, 1],
        ]);
        assert_eq!(m.rank(), 2);
    }
}
