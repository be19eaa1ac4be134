//! Few-weight linear codes C_{f,g} built from pairs of functions over a
//! finite-field tower, their subfield and punctured codes, exact weight
//! distributions, and the t-designs supported by them.

pub mod charsum;
pub mod designs;
pub mod error;
pub mod families;
pub mod funclib;
pub mod galois;
pub mod ledger;
pub mod lincode;

pub use error::{Error, Result};
