//! Abelian extensions of Q and imaginary quadratic fields with prescribed
//! norms, built from characteristic morphisms.

pub mod analysis;
pub mod arith;
pub mod config;
pub mod error;
pub mod field;
pub mod fixture;
pub mod group;
pub mod linalg;
pub mod morphism;
pub mod poly;
pub mod residue;
pub mod search;

pub use error::{Error, ErrorKind, Result};
pub use field::{BaseField, FieldElement, PlaceKind, PrimePlace};
pub use linalg::Matrix;

pub type IntMatrix = Matrix<i64>;
pub type BigMatrix = Matrix<num_bigint::BigInt>;
