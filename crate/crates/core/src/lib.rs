//! Exact computation of the multiplicities in the mixed trace cocharacter
//! sequence of two generic 3x3 matrices.
//!
//! The crate is layered bottom-up:
//!
//! - [`exactalg`]: rational scalars, sparse polynomials, reduced rational
//!   functions and partial fractions over fixed pole sets.
//! - [`series`]: truncated bivariate power series, Schur functions in two
//!   variables, and the brute-force multiplicity oracle built on the
//!   Hilbert series of the mixed trace algebra.
//! - [`mseries`]: the multiplicity-series calculus (reconstruction, the
//!   operators `Y` and `Y_a`) and both closed forms of the multiplicity
//!   series.
//! - [`closedform`]: explicit coefficient polynomials, the multiplicity
//!   formula, asymptotics and derived cocharacter values.
//! - [`verify`]: the end-to-end identity checks behind `cochar verify`.

pub mod closedform;
pub mod constants;
pub mod error;
pub mod exactalg;
pub mod mseries;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
