//! Pseudo-spectral solver and verification harness for the regularized
//! stationary micropolar system on a periodic box.

pub mod error;
pub mod operators;
pub mod solver;
pub mod spectral;
pub mod verification;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/overview.md")]
mod book_overview {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/spectral.md")]
mod book_spectral {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/operators.md")]
mod book_operators {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/solver.md")]
mod book_solver {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/verification.md")]
mod book_verification {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
