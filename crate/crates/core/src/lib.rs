//! Hereditarity of category algebras of finite EI categories.
//!
//! The combinatorial deciders live in [`category`], [`constructions`] and
//! [`bass_serre`]; [`oracle`] recomputes the same answers by exact linear
//! algebra over the category algebra.

pub mod bass_serre;
pub mod category;
pub mod constructions;
pub mod corpus;
pub mod group;
pub mod linalg;
pub mod oracle;
pub mod quiver;

pub use category::{EICategory, HereditarityVerdict, Side};
pub use group::{CoefficientField, FiniteGroup, GroupMap, Subgroup};
