//! Exact linear algebra over prime fields and the rationals.

pub mod field;
pub mod matrix;
pub mod radical;

pub use field::{Field, PrimeField, RationalField};
pub use matrix::{nullspace, rank, rref, Echelon, SparseEchelon, Subspace, Vector};
pub use radical::{radical, RadicalError, StructAlgebra};
