//! Hyponormality of Toeplitz operators with polynomial symbols in `z` and
//! `zb` on the Bergman space of the unit disk.

pub mod arith;
pub mod criteria;
pub mod error;
pub mod operator;
pub mod spectral;
pub mod symbol;

pub use error::{Error, Result};
