//! Exact-arithmetic combinatorics for two-faced (left/right) families of
//! non-commutative random variables.
//!
//! The crate is organised around the lattice of bi-non-crossing partitions:
//!
//! * [`partition`] — set partitions of `{1..n}`, refinement, non-crossing
//!   partitions and the classical Kreweras complement.
//! * [`bnc`] — side patterns, the transport permutation, the bi-non-crossing
//!   lattice, shaded two-column diagrams and the Kreweras complement on them.
//! * [`incidence`] — the incidence algebra on those lattices: convolution,
//!   delta/zeta/Möbius, interval factorisation and multiplicative nets.
//! * [`cumulant`] — moment/cumulant transforms, joint distributions of
//!   independent pairs, coefficient formulas, universal polynomials and the
//!   multiplicative convolution of cumulant tables.
//! * [`fock`] — a degree-truncated Fock-space operator model whose vacuum
//!   expectations reproduce the combinatorial moments.
//! * [`verify`] — named property suites shared by the CLI and the acceptance
//!   tests.
//!
//! All scalars are exact rationals ([`num::BigRational`]); every identity is
//! checked with tolerance-zero equality.

pub mod bnc;
pub mod cumulant;
pub mod error;
pub mod exec;
pub mod fock;
pub mod incidence;
pub mod partition;
pub mod ratio;
pub mod verify;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Uniform ground-set ceiling for enumerations. Bell(12) is about 4.2 million
/// partitions, the practical desk-scale limit for exhaustive work.
pub const MAX_GROUND: usize = 12;
