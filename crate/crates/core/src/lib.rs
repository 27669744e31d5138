//! Exact arithmetic for two-dimensional algebras over ℚ, ℚ(√d) and small
//! finite fields: derivation algebras, automorphism groups and a catalog of
//! the classification with brute-force cross-checks.

pub mod automorphisms;
pub mod catalog;
pub mod derivations;
pub mod error;
pub mod field;
pub mod isomorphism;
pub mod linalg;
pub mod msc;
mod text;
pub mod verify;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldKind, FieldSpec};
pub use linalg::{GL2Element, Mat};
pub use msc::Msc;
