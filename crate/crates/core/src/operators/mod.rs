//! Fourier multipliers, cutoffs, the mollified advection and pressure recovery.

mod advection;
mod collocation;
mod cutoff;
mod differential;
mod leray;
mod pressure;
mod resolvent;

pub use advection::{mollified_advection, mollified_advection_on};
pub(crate) use advection::skew_advection;
pub use collocation::Collocation;
pub use cutoff::{
    cutoff_field, cutoff_gradient_norm, cutoff_laplacian_norm, profile, profile_derivative,
    profile_second_derivative, CutoffFamily, CutoffSpec, PROFILE_SLOPE_MAX,
};
pub(crate) use differential::{derivative, frequencies};
pub use differential::{curl, differential, divergence, gradient, laplacian_scalar, laplacian_vector, Differential};
pub use leray::leray_project;
pub use pressure::{pressure_from_velocity, pressure_source};
pub(crate) use resolvent::check_epsilon;
pub use resolvent::{multiplier_sup, resolvent, resolvent_scalar, resolvent_symbol, ResolventSpec};
