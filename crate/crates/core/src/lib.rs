#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]
pub mod analysis;
pub mod cli;
pub mod error;
pub mod fading;
pub mod geometry;
pub mod interference;
pub mod metrics;
pub mod montecarlo;
pub mod numerics;
pub mod scheduling;

pub use error::{Error, Result};
