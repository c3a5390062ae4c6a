//! Simulation core for negative-group-delay (NGD) linear systems.
//!
//! Everything here is pure computation over immutable values and builds
//! without `std`; an allocator is required. File formats, configuration
//! and the command line live in the `ngd-lab` crate.
//!
//! Frequency responses use the `exp(-i w t)` transform kernel. Transfer
//! functions are rational in the dimensionless variable `p = i w (1 s)`,
//! so a system is stable when every pole has a negative real part in the
//! `p` plane (the upper half of the complex `w` plane).
#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
mod fft;
pub mod filtering;
pub mod interp;
pub mod metrics;
pub mod mzi;
pub mod poly;
pub mod pulses;
pub mod signal;
pub mod transfer;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use signal::{Signal, Spectrum};
pub use transfer::{Cascade, Response, StabilityReport, TransferFunction};
