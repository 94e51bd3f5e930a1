//! Dynamic (AC) Stark shifts and photoionization of hydrogen-like atoms in
//! circularly polarized light.

// `!(x > 0.0)` is used deliberately so NaN inputs are rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bspline;
pub mod cli;
pub mod error;
pub mod hydrogenic;
pub mod linalg;
pub mod quadrature;
pub mod quantized;
pub mod radial;
pub mod stark;
pub mod tdse;
pub mod units;

pub use error::{Error, Result};
