//! Exact arithmetic for cyclotomic units over the cyclotomic Z_ell-extensions,
//! the unit-equation families they produce, and the curve families built from
//! them.

pub mod arithscan;
pub mod cycfield;
pub mod curves;
pub mod cycpoly;
pub mod error;
pub mod numth;
pub mod relsearch;
pub mod sunit;
pub mod symbolic;
pub mod unitlattice;

pub use error::{Error, Result};
