#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod ambient;
pub mod calculus;
pub mod catalog;
pub mod error;
pub mod exec;
pub mod profile_ode;
pub mod residuals;
pub mod shape;
pub mod surface;

pub use error::{Error, Result};
