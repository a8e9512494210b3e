#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod flux;
pub mod fluxshell;
mod linalg;
pub mod modes;
pub mod overlap;
pub mod sae;
pub mod specfun;

pub use error::{Error, Result};
