//! Ramification jumps of Artin-Schreier covers of `k[[T,U]]` along regular
//! curve germs, over finite coefficient fields.

pub mod asympt;
pub mod cover;
pub mod error;
pub mod ffield;
pub mod local;
pub mod series;
pub mod strata;

pub use error::{Error, ErrorCategory, Result};
