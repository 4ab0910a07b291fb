//! Exact-arithmetic toolkit for finite, arity-truncated A∞-categories.

pub mod category;
pub mod cohomology;
pub mod comparison;
pub mod dg;
pub mod error;
pub mod functor;
pub mod generate;
pub mod graded;
pub mod hpt;
pub mod io;
pub mod linalg;
pub mod multilinear;
pub mod relations;
pub mod report;
pub mod scalar;
pub mod shifts;
pub mod sign;
pub mod twisted;

pub use error::{Error, Result};
pub use scalar::Scalar;
