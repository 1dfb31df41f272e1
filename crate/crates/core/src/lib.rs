//! Exact computation of graded pieces of Koszul modules `W(V, K)` for
//! `K ⊆ ∧²V`, resonance checks, and closed-form enumerative formulas.
//!
//! Arithmetic is exact throughout: rationals via `num-rational`, or a prime
//! field `F_p` with `p < 2^62`.

#![allow(clippy::needless_range_loop)]

pub mod bases;
pub(crate) mod elim;
pub mod engine;
pub mod error;
pub mod families;
pub mod field;
pub mod formulas;
pub mod kfile;
pub mod linalg;
pub mod rng;
pub mod sparse;
pub mod verify;

pub use engine::Subspace2;
pub use error::{Error, Result};
pub use field::FieldConfig;
pub use sparse::SparseMatrix;
