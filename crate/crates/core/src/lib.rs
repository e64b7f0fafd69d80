//! Affine dKdV: carrier/state dynamics on infinite reduced words in the
//! affine symmetric group, driven by Lusztig's braid moves, together with
//! tau-function (Hirota bilinear) soliton solutions.

pub mod affine;
pub mod cli;
pub mod dkdv;
pub mod error;
pub mod lusztig;
pub mod network;
pub mod scalar;
pub mod tau;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
