//! Exact algebra for rank-`d` Heisenberg Fock spaces attached to even
//! positive-definite lattices, together with the linear data that cuts out
//! spaces of coinvariants:
//!
//! * truncated Laurent polynomials over the Gaussian rationals with a
//!   residue pairing whose determinacy is tracked exactly,
//! * lattice Heisenberg modes, their bracket, and metric-dual quadratic
//!   operators,
//! * level-one and level-zero Fock representations with a Virasoro action,
//! * outgoing subspaces extracted from extended Siegel points or from
//!   coordinatized hyperelliptic curves,
//! * a coinvariant-dimension engine with an independent symmetric-algebra
//!   oracle for the commutative level.
//!
//! Everything is computed over exact fields; no floating point is used
//! anywhere. The crate is `no_std` (with `alloc`); IO, file formats and the
//! command-line driver live in the companion `coinv-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod coinv;
pub mod curves;
pub mod error;
pub mod fock;
pub mod lattice;
pub mod laurent;
pub mod linalg;
pub mod outgoing;
pub mod ppav;
pub mod scalar;

pub use coinv::{
    coinvariant_dims, exponentiate, pi0_oracle, preserve_check, scale_by_eigenvalue,
    CoinvariantProblem, CoinvariantReport, CoinvariantSpace, ExpOutcome, Margins,
    PreserveFailure, PreserveReport,
};
pub use error::{Error, Result};
pub use fock::{FockVector, Level, PbwMonomial};
pub use lattice::{Lattice, LatticeVector, Mode, QuadraticOperator};
pub use laurent::LaurentPoly;
pub use outgoing::{OutgoingLattice, OutgoingSource};
pub use scalar::{Rational, Scalar};
