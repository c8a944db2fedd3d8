#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]
//! Closed-form optimal generators for Wasserstein GANs.
//!
//! One-dimensional solvers for linear, sigmoid and ReLU generators, the
//! asymptotically optimal linear generator for sliced WGANs, and the
//! optimal-transport, kernel density and special-function routines they use.

extern crate alloc;

pub mod activation;
pub mod distributions;
pub mod error;
pub mod kde;
pub mod linalg;
pub mod ot1d;
pub mod quad;
pub mod rng;
pub mod sgd;
pub mod sliced;
pub mod special;
pub mod wgan1d;

pub use error::{Error, Result};
