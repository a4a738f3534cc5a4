//! Numerical laboratory for non-commutative norm experiments on finite matrices.
//!
//! The crate is organized around six areas:
//!
//! * [`matcore`] - complex matrices, Schatten norms, spectral primitives,
//!   seeded random ensembles, and a plain-text matrix exchange format.
//! * [`decomp`] - decomposition norms defined as infima over splits
//!   (entrywise row/column splits, square-function splits of matrix tuples,
//!   sup-norm splits), computed by small deterministic solvers.
//! * [`khintchine`] - sign-ensemble moments, empirical Khintchine ratios,
//!   contraction constants for bounded coefficients, unconditionality
//!   constants of index sets, and a greedy Sidon-set construction.
//! * [`schur`] - Schur multipliers: norm estimation, two interchangeable
//!   certificate formats with constructive conversions, spectral ratio
//!   symbols, weighted anticommutator maps, and a Maurey-style density search.
//! * [`interp`] - interpolation inequality scans (weighted Hölder, Kosaki,
//!   Rademacher tensor families, anticommutator-weighted variants) and a
//!   constructive factorization witness with a certified 2-norm bound.
//! * [`spin`] - a finite fermionic spin system built from Jordan-Wigner
//!   generators, its noise semigroup, hypercontractivity and Kahane-type
//!   checks, and an experimental vector-valued factorization norm.
//!
//! All randomness flows through [`matcore::Seed`] so that every experiment is
//! reproducible; parallel runs produce bit-identical results to serial ones.

pub mod decomp;
pub mod error;
pub mod interp;
pub mod khintchine;
pub mod matcore;
pub mod schur;
pub mod spin;

pub use error::{Error, Result};
