// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod arith;
pub mod error;
pub mod harness;
pub mod points;
pub mod spectral;

pub use error::{Error, Result};
