//! Exterior calculus on affine 3-space: oriented areas and volumes, bi-vectors
//! of closed curves, and several competing surface-area functionals.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod area_est;
pub mod curves;
pub mod error;
pub mod exterior;
pub mod polytope;
pub mod sampling;
pub mod schema;
pub mod sum;
pub mod surfdsl;
pub mod sweep;
pub mod winding;

pub use error::{Error, Result};
