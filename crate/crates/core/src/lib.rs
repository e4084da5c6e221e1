//! Reciprocal and skew-reciprocal integer polynomials: certified Mahler
//! measures and houses, the square-substitution decomposition of
//! skew-reciprocal polynomials, height-bounded minimum searches, and
//! symplectic / anti-symplectic companion matrices.

pub mod error;
pub mod measure;
pub mod poly;
pub mod search;
pub mod structure;
pub mod symplectic;

pub use error::{Error, Result};
pub use measure::{Enclosure, MeasureOptions, MeasureResult};
pub use poly::IntPoly;
