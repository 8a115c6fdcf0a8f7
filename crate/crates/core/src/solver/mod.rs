//! The mollified fixed-point map, its iteration, and parameter sweeps.

mod forcing;
mod gmres;
mod operator;
mod params;
mod picard;
mod state;
mod sweep;

pub use forcing::{gaussian_bump_forcing, single_mode_forcing};
pub use operator::{apply_t, System, Terms};
pub use params::{solenoidal_part, SolverParams};
pub use picard::{fixed_point_defect, picard_solve, SolveError, SolveFailure, SolveTrace, TraceRow, BLOW_UP};
pub use state::{e_norm, State};
pub use sweep::{
    apriori_bound, apriori_left, continuation, homotopy_scan, ContinuationCell, HomotopyPoint, HOMOTOPY_FACTOR,
};
