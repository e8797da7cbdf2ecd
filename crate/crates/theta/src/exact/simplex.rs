//! Rational-pivot simplex for small equality-form linear programs.
//!
//! Solves `max c.x  s.t.  A x = b, x >= 0` exactly over the rationals with
//! Bland's anti-cycling rule, so every run of the same instance produces the
//! same optimal basis.  The solution carries the dual vector `y = c_B B^{-1}`
//! and strong duality (`c.x* = y.b`) together with dual feasibility
//! (`y.A_j >= c_j`) are checked exactly before returning.

use super::matrix::ExactMatrix;
use super::Rational;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error("LP is infeasible")]
    Infeasible,
    #[error("LP is unbounded")]
    Unbounded,
    #[error("malformed LP: {0}")]
    Malformed(String),
}

/// Equality-form maximization problem: columns of the constraint matrix are
/// given explicitly, one per variable.
#[derive(Clone, Debug)]
pub struct LpProblem {
    /// Constraint columns `A_j`, each of length `rhs.len()`.
    pub columns: Vec<Vec<Rational>>,
    /// Right-hand side `b`.
    pub rhs: Vec<Rational>,
    /// Objective coefficients `c_j`, one per column.
    pub objective: Vec<Rational>,
}

impl LpProblem {
    /// Problem maximizing the plain sum of the variables.
    pub fn sum_objective(columns: Vec<Vec<Rational>>, rhs: Vec<Rational>) -> Self {
        let n = columns.len();
        LpProblem { columns, rhs, objective: vec![Rational::from_integer(1.into()); n] }
    }
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    /// Optimal objective value.
    pub value: Rational,
    /// Primal weights, one per column (all >= 0).
    pub primal: Vec<Rational>,
    /// Dual vector, one entry per constraint row.
    pub dual: Vec<Rational>,
}

struct Tableau {
    /// rows x (cols + 1); last column is the rhs.
    a: Vec<Vec<Rational>>,
    /// objective row: reduced costs, last entry = -(objective value)
    obj: Vec<Rational>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    /// Bland pivoting until no reduced cost is positive.
    /// Returns Err(Unbounded) if a ray is found.
    fn optimize(&mut self) -> Result<(), LpError> {
        loop {
            let entering = match (0..self.ncols).find(|&j| self.obj[j] > Rational::zero()) {
                Some(j) => j,
                None => return Ok(()),
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for r in 0..self.a.len() {
                if self.a[r][entering] > Rational::zero() {
                    let ratio = &self.a[r][self.ncols] / &self.a[r][entering];
                    let better = match &leaving {
                        None => true,
                        Some((br, bratio)) => {
                            ratio < *bratio || (ratio == *bratio && self.basis[r] < self.basis[*br])
                        }
                    };
                    if better {
                        leaving = Some((r, ratio));
                    }
                }
            }
            let (row, _) = leaving.ok_or(LpError::Unbounded)?;
            self.pivot(row, entering);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.a[row][col].recip();
        for j in 0..=self.ncols {
            self.a[row][j] = &self.a[row][j] * &inv;
        }
        for r in 0..self.a.len() {
            if r != row && !self.a[r][col].is_zero() {
                let f = self.a[r][col].clone();
                for j in 0..=self.ncols {
                    let sub = &f * &self.a[row][j];
                    self.a[r][j] -= sub;
                }
            }
        }
        if !self.obj[col].is_zero() {
            let f = self.obj[col].clone();
            for j in 0..=self.ncols {
                let sub = &f * &self.a[row][j];
                self.obj[j] -= sub;
            }
        }
        self.basis[row] = col;
    }
}

/// Exact two-phase simplex with Bland's rule.
pub fn simplex_max(p: &LpProblem) -> Result<LpSolution, LpError> {
    let m = p.rhs.len();
    let n = p.columns.len();
    if p.objective.len() != n {
        return Err(LpError::Malformed(format!(
            "{} objective coefficients for {} columns",
            p.objective.len(),
            n
        )));
    }
    for (j, col) in p.columns.iter().enumerate() {
        if col.len() != m {
            return Err(LpError::Malformed(format!(
                "column {j} has length {}, expected {m}",
                col.len()
            )));
        }
    }

    // Rows with negative rhs are negated so the artificial start is feasible.
    let sign: Vec<bool> = p.rhs.iter().map(|b| *b < Rational::zero()).collect();
    let row_val = |col: &[Rational], r: usize| {
        if sign[r] {
            -col[r].clone()
        } else {
            col[r].clone()
        }
    };

    // Phase 1: minimize the sum of artificial variables (as max of the
    // negated sum).  Columns 0..n are the real variables, n..n+m artificial.
    let ncols = n + m;
    let mut a: Vec<Vec<Rational>> = (0..m)
        .map(|r| {
            let mut row: Vec<Rational> = (0..ncols)
                .map(|j| {
                    if j < n {
                        row_val(&p.columns[j], r)
                    } else {
                        Rational::from_integer(((j - n == r) as i64).into())
                    }
                })
                .collect();
            row.push(if sign[r] { -p.rhs[r].clone() } else { p.rhs[r].clone() });
            row
        })
        .collect();

    // Phase-1 objective: -sum of artificials, expressed in reduced form
    // against the artificial basis.
    let mut obj = vec![Rational::zero(); ncols + 1];
    for r in 0..m {
        for j in 0..n {
            obj[j] += a[r][j].clone();
        }
        obj[ncols] += a[r][ncols].clone();
    }

    let mut t = Tableau { a, obj, basis: (n..n + m).collect(), ncols };
    t.optimize()?;
    // Phase-1 optimum is -(sum of artificials); obj[ncols] = -(-value)...
    // The stored entry is -(current objective value); feasible iff it is 0.
    if !t.obj[ncols].is_zero() {
        return Err(LpError::Infeasible);
    }

    // Drive any artificial variable out of the basis; drop redundant rows.
    let mut keep_rows: Vec<bool> = vec![true; m];
    for r in 0..m {
        if t.basis[r] >= n {
            match (0..n).find(|&j| !t.a[r][j].is_zero()) {
                Some(j) => t.pivot(r, j),
                None => keep_rows[r] = false, // redundant constraint
            }
        }
    }
    let kept: Vec<usize> = (0..m).filter(|&r| keep_rows[r]).collect();
    a = kept.iter().map(|&r| {
        let mut row: Vec<Rational> = t.a[r][..n].to_vec();
        row.push(t.a[r][ncols].clone());
        row
    }).collect();
    let basis: Vec<usize> = kept.iter().map(|&r| t.basis[r]).collect();

    // Phase-2 objective, reduced against the current basis.
    let mut obj: Vec<Rational> = p.objective.clone();
    obj.push(Rational::zero());
    for (r, &b) in basis.iter().enumerate() {
        if !obj[b].is_zero() {
            let f = obj[b].clone();
            for j in 0..=n {
                let sub = &f * &a[r][j];
                obj[j] -= sub;
            }
        }
    }

    let mut t = Tableau { a, obj, basis, ncols: n };
    t.optimize()?;

    let mut primal = vec![Rational::zero(); n];
    for (r, &b) in t.basis.iter().enumerate() {
        primal[b] = t.a[r][t.ncols].clone();
    }
    let value = -t.obj[n].clone();

    // Dual vector from B^T y = c_B over the kept rows, then re-expanded to
    // all original rows (redundant rows get dual weight 0).
    let bmat = ExactMatrix::from_rows(
        kept.iter()
            .map(|&orig_r| t.basis.iter().map(|&j| row_val(&p.columns[j], orig_r)).collect())
            .collect(),
    )
    .transpose();
    let cb = ExactMatrix::from_columns(&[t
        .basis
        .iter()
        .map(|&j| p.objective[j].clone())
        .collect::<Vec<_>>()]);
    let y = bmat
        .solve(&cb)
        .map_err(|e| LpError::Malformed(format!("dual solve failed: {e}")))?;
    let mut dual = vec![Rational::zero(); m];
    for (i, &orig_r) in kept.iter().enumerate() {
        let v = y[(i, 0)].clone();
        dual[orig_r] = if sign[orig_r] { -v } else { v };
    }

    // Exact optimality certificates: strong duality and dual feasibility.
    let dual_value: Rational = dual
        .iter()
        .zip(p.rhs.iter())
        .map(|(y, b)| y * b)
        .fold(Rational::zero(), |acc, x| acc + x);
    if dual_value != value {
        return Err(LpError::Malformed(format!(
            "internal error: strong duality violated ({dual_value} != {value})"
        )));
    }
    for (j, col) in p.columns.iter().enumerate() {
        let ya: Rational = dual
            .iter()
            .zip(col.iter())
            .map(|(y, a)| y * a)
            .fold(Rational::zero(), |acc, x| acc + x);
        if ya < p.objective[j] {
            return Err(LpError::Malformed(format!(
                "internal error: dual infeasible at column {j}"
            )));
        }
    }

    Ok(LpSolution { value, primal, dual })
}
