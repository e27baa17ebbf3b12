//! Exact Weyl-matrix and Laurent-polynomial realizations of the
//! q-deformed Virasoro (CZ) algebra, with a small relation-checking DSL.

pub mod cli;
pub mod czrep;
pub mod error;
pub mod phase;
pub mod qcalc;
pub mod qplane;
pub mod relcheck;
pub mod report;
pub mod tbm;
pub mod weyl;

pub use error::{Error, Result};
