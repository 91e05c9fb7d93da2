//! Envelope theory for systems of identical particles interacting through
//! K-body hyperradial forces, with a symmetry-adapted harmonic-oscillator
//! variational solver for three-body benchmarks.
#![no_std]

extern crate alloc;

pub mod analytic;
mod float;
pub mod error;
pub mod et;
pub mod model;
pub mod numeric;
pub mod observables;
pub mod oracle;
pub mod oscillator;
pub mod special;

pub use error::{Error, Result};
