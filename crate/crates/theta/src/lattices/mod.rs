//! The lattice catalog: root lattices, Kneser gluing, and the eight
//! self-dual lattices of rank 16, together with norm-shell enumeration.
//!
//! Generators are stored as rows over the exact rationals in an ambient
//! coordinate space (the ambient dimension can exceed the rank, e.g. for the
//! A-family which lives in a sum-zero hyperplane).  All coordinates have
//! denominator dividing 4; Gram matrices are computed exactly, checked for
//! integrality, and all subsequent enumeration happens in integer basis
//! coordinates against the Gram matrix.

mod roots;
mod shells;

pub use roots::{glue, GlueError};
pub use shells::{enumerate_shells, shell_count, NormShell};

use crate::exact::{rat, ExactMatrix, Rational};
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// Identifier of a lattice in the catalog or of a root component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LatticeId {
    /// One of the eight self-dual rank-16 lattices, index 0..=7.
    L(u8),
    /// The cubic lattice Z^n.
    Z(u8),
    /// The root lattice D_n.
    D(u8),
    /// The root lattice A_n.
    A(u8),
    E7,
    E8,
}

impl fmt::Display for LatticeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeId::L(i) => write!(f, "L{i}"),
            LatticeId::Z(n) => write!(f, "Z{n}"),
            LatticeId::D(n) => write!(f, "D{n}"),
            LatticeId::A(n) => write!(f, "A{n}"),
            LatticeId::E7 => write!(f, "E7"),
            LatticeId::E8 => write!(f, "E8"),
        }
    }
}

impl FromStr for LatticeId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("unknown lattice id `{s}`");
        if s == "E7" {
            return Ok(LatticeId::E7);
        }
        if s == "E8" {
            return Ok(LatticeId::E8);
        }
        let (head, tail) = s.split_at(1usize.min(s.len()));
        let n: u8 = tail.parse().map_err(|_| bad())?;
        match head {
            "L" if n < 8 => Ok(LatticeId::L(n)),
            "Z" if (1..=16).contains(&n) => Ok(LatticeId::Z(n)),
            "D" if (2..=16).contains(&n) => Ok(LatticeId::D(n)),
            "A" if (1..=16).contains(&n) => Ok(LatticeId::A(n)),
            _ => Err(bad()),
        }
    }
}

/// A lattice given by a generator matrix (rows = basis vectors, possibly in
/// an ambient space of larger dimension) and its integral Gram matrix.
#[derive(Clone, Debug)]
pub struct LatticeBasis {
    pub id: LatticeId,
    pub rank: usize,
    /// rank x ambient, rows are the basis vectors.
    pub generator: ExactMatrix,
    /// rank x rank, row-major, exact integer Gram matrix.
    pub gram: Vec<i64>,
}

impl LatticeBasis {
    /// Builds the basis from a generator matrix, checking that the Gram
    /// matrix is integral.
    pub fn from_generator(id: LatticeId, generator: ExactMatrix) -> Self {
        let rank = generator.rows();
        let gt = generator.transpose();
        let gram_q = generator.mul(&gt);
        let mut gram = Vec::with_capacity(rank * rank);
        for i in 0..rank {
            for j in 0..rank {
                let x = &gram_q[(i, j)];
                assert!(x.is_integer(), "{id}: non-integral Gram entry at ({i},{j}): {x}");
                let v: i64 = x.to_integer().try_into().expect("Gram entry out of i64");
                gram.push(v);
            }
        }
        LatticeBasis { id, rank, generator, gram }
    }

    pub fn gram_at(&self, i: usize, j: usize) -> i64 {
        self.gram[i * self.rank + j]
    }

    /// Exact determinant of the Gram matrix.
    pub fn gram_det(&self) -> Rational {
        self.gram_matrix().det().expect("gram is square")
    }

    pub fn gram_matrix(&self) -> ExactMatrix {
        ExactMatrix::from_rows(
            (0..self.rank)
                .map(|i| (0..self.rank).map(|j| rat(self.gram_at(i, j))).collect())
                .collect(),
        )
    }

    /// A lattice is self-dual iff its Gram matrix is integral (by
    /// construction) with integral inverse and determinant +-1.
    pub fn is_self_dual(&self) -> bool {
        let det = self.gram_det();
        if det != rat(1) && det != rat(-1) {
            return false;
        }
        let inv = match self.gram_matrix().inverse() {
            Ok(m) => m,
            Err(_) => return false,
        };
        (0..self.rank).all(|i| (0..self.rank).all(|j| inv[(i, j)].is_integer()))
    }

    /// Even: every vector norm is even, equivalently the Gram diagonal is
    /// even (integral lattice).
    pub fn is_even(&self) -> bool {
        (0..self.rank).all(|i| self.gram_at(i, i) % 2 == 0)
    }

    /// Complete list of vectors of norm exactly `n`, in basis coordinates.
    pub fn norm_shell(&self, n: i64) -> NormShell {
        if n < 0 {
            return NormShell::empty(n, self.rank);
        }
        let mut shells = enumerate_shells(&self.gram, self.rank, n);
        shells.swap_remove(n as usize)
    }

    /// Number of vectors of norm exactly `n`, without storing them.
    pub fn shell_count(&self, n: i64) -> u64 {
        shell_count(&self.gram, self.rank, n)
    }

    /// Largest denominator appearing in the generator (1, 2 or 4 here).
    pub fn coordinate_denominator(&self) -> i64 {
        let mut d = num_bigint::BigInt::one();
        for i in 0..self.generator.rows() {
            for x in self.generator.row(i) {
                d = num_integer::lcm(d, x.denom().clone());
            }
        }
        d.try_into().expect("denominator fits i64")
    }
}

/// The eight self-dual rank-16 lattices, built once.
pub struct Catalog {
    lattices: Vec<Arc<LatticeBasis>>,
}

impl Catalog {
    pub fn new() -> Self {
        let lattices = (0..8u8)
            .map(|i| Arc::new(roots::build_catalog_lattice(i)))
            .collect();
        Catalog { lattices }
    }

    pub fn get(&self, id: LatticeId) -> Arc<LatticeBasis> {
        match id {
            LatticeId::L(i) => self.lattices[i as usize].clone(),
            other => Arc::new(roots::build_component(other)),
        }
    }

    pub fn catalog_ids() -> [LatticeId; 8] {
        [0, 1, 2, 3, 4, 5, 6, 7].map(LatticeId::L)
    }

    /// Human-readable construction name for a catalog lattice.
    pub fn name(id: LatticeId) -> &'static str {
        match id {
            LatticeId::L(0) => "(D8+D8)+",
            LatticeId::L(1) => "Z+A15+",
            LatticeId::L(2) => "Z2+(E7+E7)+",
            LatticeId::L(3) => "Z4+D12+",
            LatticeId::L(4) => "Z8+E8",
            LatticeId::L(5) => "Z16",
            LatticeId::L(6) => "E8+E8",
            LatticeId::L(7) => "D16+",
            _ => "component",
        }
    }
}

impl Default for Catalog {
    fn default() -> Self {
        Self::new()
    }
}
