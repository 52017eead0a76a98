//! Exact computation of cohomology and Massey products for finitely
//! generated graded-commutative differential algebras over the rationals and
//! their quadratic extensions.
//!
//! The library represents free dgas (and table-backed quotients such as
//! truncations and Poincaré dualizations) with arbitrary-precision rational
//! scalars, computes deterministic splittings of each graded piece, builds
//! generic defining systems for n-fold Massey products, and decides
//! well-definedness and triviality exactly, with witnesses and machine-
//! checkable obstruction certificates. See the `massey` binary for the
//! command-line front end.

pub mod cohomology;
pub mod constructions;
pub mod corpus;
pub mod dsl;
pub mod engine;
pub mod error;
pub mod field;
pub mod gca;
pub mod json;
pub mod linalg;
pub mod poly;
pub mod solve;

pub use error::MasseyError;
