//! Complete elliptic integrals, Jacobi theta functions and Lambert-type
//! series with error-controlled summation, plus a residual audit engine
//! that checks a catalog of theta/elliptic identities numerically.

// `!(x < y)` guards are deliberate: they reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod elliptic;
pub mod error;
pub mod registry;
pub mod series;
pub mod singular;
pub mod summation;
pub mod theta;

pub use error::{Error, Result};
