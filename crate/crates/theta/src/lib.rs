//! Exact arithmetic for the theta series of the eight self-dual lattices of
//! rank 16.
//!
//! The crate builds the lattice catalog by Kneser gluing, enumerates lattice
//! vectors to obtain genus-g Fourier coefficients of the associated Siegel
//! theta series, and verifies the linear relations among them (filtrations,
//! the genus-4 determinant relation, Witt images, the Schottky form) as exact
//! integer and rational identities.  No floating point enters any returned
//! value; floats are used only to propose enumeration ranges that are then
//! filtered exactly.
//!
//! Module map:
//! - [`exact`]: big rationals, Gaussian rationals, dense exact matrices and a
//!   rational-pivot simplex solver.
//! - [`lattices`]: the catalog of root lattices and the eight glued rank-16
//!   lattices; norm-shell enumeration.
//! - [`qforms`]: Fourier indices (integral quadratic forms), the minimum
//!   function, the dyadic trace with exact certificates, and the translation
//!   lattice combinatorics of the two cusps.
//! - [`engine`]: the representation-number core with its persistent cache.
//! - [`harmonic`]: theta series with harmonic polynomial coefficients.
//! - [`symplectic`]: characteristics over F2 and the theta-group cosets.
//! - [`relations`]: the linear-relation laboratory over the catalog.
//! - [`qseries`]: half-integer exponent q-series (eta and theta products).
//! - [`verify`]: report-producing verification suites used by the CLI.

pub mod exact;
pub mod lattices;
pub mod qforms;
pub mod engine;
pub mod harmonic;
pub mod symplectic;
pub mod qseries;
pub mod relations;
pub mod verify;

pub use exact::{GaussianRational, Rational};
pub use lattices::{Catalog, LatticeBasis, LatticeId};
pub use qforms::FourierIndex;
