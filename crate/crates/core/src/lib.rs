//! Piecewise-affine convex-function calculus and evaluation of
//! epi-translation invariant valuations on convex functions.

pub mod cli;
pub mod convexfn;
pub mod decompose;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod hessian;
pub mod io;
pub mod linalg;
pub mod repro;
pub mod valuations;

pub use error::{Error, Result};
