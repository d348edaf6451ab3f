//! Exact arithmetic in the space of non-Archimedean norms on `k^(d+1)`
//! for a p-adically valued field `k`, together with its seminorm boundary
//! and the fully enumerable rank-2 lattice tree.
//!
//! Everything is exact: weights, valuations and distances are
//! arbitrary-precision rationals, and no floating point enters the core
//! (ultrametric equalities would not survive rounding). The crate works
//! additively throughout; the dictionary to the multiplicative picture is
//! fixed once in [`scalars`].
//!
//! # Layout
//!
//! * [`scalars`] — rationals with the p-adic valuation and the ramified
//!   extensions `k_m = Q[θ]/(θ^m − p)`;
//! * [`linalg`] — exact matrices, Smith normal form over the valuation
//!   ring, Hermite normal form over `Z_(p)`;
//! * [`building`] — diagonalized norms modulo homothety: evaluation,
//!   group action, common adapted bases, relative position, CAT(0)
//!   distance, stabilizers, folding, Cartan decomposition;
//! * [`compactification`] — boundary seminorms: strata, ray limits,
//!   boundary stabilizers, Gauss extension to polynomials;
//! * [`tree`] — the `(p+1)`-regular rank-2 lattice tree, rank-3 link
//!   counts, and the ramified-extension fixed-point-gap criterion;
//! * [`cli`] / [`json`] — the `bt` binary: JSON operands, deterministic
//!   output, exit codes 0/2/3.
//!
//! The `examples/` directory contains one runnable program per major
//! capability; start with `cargo run --example apartment_basics`.

pub mod building;
pub mod cli;
pub mod compactification;
pub mod error;
pub mod json;
pub mod linalg;
pub mod scalars;
pub mod tree;

pub use error::{Error, Result};
pub use scalars::{val_p, ExtScalar, FieldConfig, Rational, Val};
