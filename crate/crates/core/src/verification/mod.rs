//! Numerical audits: residuals, energy identity, nullities and ledgers.

mod counterexample;
mod decay;
mod energy;
mod ladder;
mod liouville;
mod report;
mod residuals;
mod sampling;
mod trilinear;

pub use counterexample::{counterexample_residual, flow_residual, CounterexampleReport, QuadraticFlow};
pub use decay::{decay_scan, DecayColumn, DecayTable, Shape};
pub use energy::energy_ledger;
pub(crate) use energy::spectral_energy_gap;
pub use ladder::{interpolation, regularity_ladder, DivIdentity, Interpolation, LadderReport, Rung};
pub use liouville::{holder_ell, liouville_ledger, LIOUVILLE_TERMS, Q_WINDOW};
pub use report::{LedgerReport, LedgerTerm, ResidualReport};
pub use residuals::{residuals, transport, ResidualMode};
pub(crate) use residuals::mollified_from_terms;
pub use trilinear::{relative_divergence, trilinear_nullity};
