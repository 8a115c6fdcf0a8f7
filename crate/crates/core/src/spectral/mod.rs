//! Periodic grid, transforms, dealiasing and norms.

pub(crate) mod fft;
mod field;
mod grid;
mod norms;
pub mod random;

pub use field::{AnyField, Field, Samples, ScalarField, VectorField};
pub use grid::{make_grid, Grid};
pub use norms::{
    inner_product, lebesgue_norm, lebesgue_norm_refined, lebesgue_norm_samples, magnitude_samples, sobolev_norm,
    Region,
};
pub(crate) use field::lattice_index_checked;
pub(crate) use norms::lebesgue_of_samples;
