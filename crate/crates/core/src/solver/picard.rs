use serde::Serialize;
use thiserror::Error;

use super::gmres::gmres;
use super::operator::System;
use super::params::SolverParams;
use super::state::{e_norm, State};
use crate::error::Error;
use crate::spectral::sobolev_norm;
use crate::verification::{mollified_from_terms, spectral_energy_gap};

/// Norms beyond this abort the iteration.
pub const BLOW_UP: f64 = 1e6;

const KRYLOV_RESTART: usize = 40;
const KRYLOV_MAX: usize = 400;
const KRYLOV_FRACTION: f64 = 1e-3;

/// One row of the iteration history.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub iter: usize,
    pub h1_u: f64,
    pub h1_w: f64,
    pub sqrt_eps_h2_u: f64,
    pub sqrt_eps_h2_w: f64,
    /// `||U - lambda T(U)||_E` at this iterate.
    pub update_norm: f64,
    pub r_mom: f64,
    pub r_mic: f64,
    pub energy_gap: f64,
    /// Krylov steps spent on the following update.
    pub krylov_iters: usize,
}

/// Per-iteration norms, residuals and energy gaps.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SolveTrace {
    pub rows: Vec<TraceRow>,
}

impl SolveTrace {
    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Why a solve stopped without an accepted fixed point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveFailure {
    #[error("no convergence after {iterations} iterations (last update norm {update_norm:e})")]
    NotConverged { iterations: usize, update_norm: f64 },
    #[error("blow-up at iteration {iteration}: norm {norm:e} exceeds {BLOW_UP:e}")]
    BlowUp { iteration: usize, norm: f64 },
    #[error("non-finite values at iteration {iteration}")]
    NonFinite { iteration: usize },
    #[error(transparent)]
    Invalid(#[from] Error),
}

/// A failed solve with the trace up to the failure.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{failure}")]
pub struct SolveError {
    pub failure: SolveFailure,
    pub trace: SolveTrace,
    pub last: Option<State>,
}

impl SolveError {
    fn invalid(e: Error) -> Self {
        Self { failure: SolveFailure::Invalid(e), trace: SolveTrace::default(), last: None }
    }
}

fn row(iter: usize, s: &State, eps: f64, update_norm: f64) -> TraceRow {
    let h = |v, k| sobolev_norm(v, k).unwrap();
    TraceRow {
        iter,
        h1_u: h(&s.u, 1.0),
        h1_w: h(&s.omega, 1.0),
        sqrt_eps_h2_u: eps.sqrt() * h(&s.u, 2.0),
        sqrt_eps_h2_w: eps.sqrt() * h(&s.omega, 2.0),
        update_norm,
        r_mom: 0.0,
        r_mic: 0.0,
        energy_gap: 0.0,
        krylov_iters: 0,
    }
}

/// Damped linear-implicit iteration for `U = lambda T(U)`.
///
/// Each step solves `(A - lambda L) V = lambda N(U_k)` by preconditioned
/// GMRES, where `A = eps Delta^2 - Delta`, `L` collects the linear coupling,
/// grad-div and damping terms and `N` the advection and forcing, then sets
/// `U_{k+1} = (1 - alpha) U_k + alpha V`. Iteration stops once
/// `||U - lambda T(U)||_E < tol`.
pub fn picard_solve(params: &SolverParams, init: State) -> Result<(State, SolveTrace), SolveError> {
    if init.grid() != params.grid() {
        return Err(SolveError::invalid(Error::GridMismatch));
    }
    let sys = System::new(params).map_err(SolveError::invalid)?;
    let eps = params.epsilon;
    let lambda = params.lambda;
    let alpha = params.damping;
    let weights = sys.packed_weights();
    let mut state = State { u: crate::operators::leray_project(&init.u.dealiased()), omega: init.omega.dealiased() };
    let mut trace = SolveTrace::default();

    for iter in 0..=params.max_iters {
        let fail = |failure, trace: SolveTrace, last: &State| Err(SolveError { failure, trace, last: Some(last.clone()) });
        if !state.is_finite() {
            return fail(SolveFailure::NonFinite { iteration: iter }, trace, &state);
        }
        let terms = sys.terms(&state);
        let t_u = sys.resolve(&sys.rhs(&terms)).scaled(lambda);
        let defect = state.axpy(-1.0, &t_u);
        let update_norm = defect.e_norm(eps);
        let mut r = row(iter, &state, eps, update_norm);
        let res = mollified_from_terms(&sys, &state, &terms, lambda);
        r.r_mom = res.r_mom;
        r.r_mic = res.r_mic;
        r.energy_gap = spectral_energy_gap(&sys, &state, &terms, lambda);

        let size = [r.h1_u, r.h1_w, r.sqrt_eps_h2_u, r.sqrt_eps_h2_w, update_norm].into_iter().fold(0.0, f64::max);
        if !size.is_finite() || !update_norm.is_finite() {
            trace.rows.push(r);
            return fail(SolveFailure::NonFinite { iteration: iter }, trace, &state);
        }
        if size > BLOW_UP {
            trace.rows.push(r);
            return fail(SolveFailure::BlowUp { iteration: iter, norm: size }, trace, &state);
        }
        if update_norm < params.tol {
            trace.rows.push(r);
            return Ok((state, trace));
        }
        if iter == params.max_iters {
            trace.rows.push(r);
            return fail(SolveFailure::NotConverged { iterations: iter, update_norm }, trace, &state);
        }

        let n = sys.resolve(&sys.nonlinear(&terms)).scaled(lambda);
        let b = sys.pack(&n);
        let mut x = sys.pack(&state);
        let apply = |v: &[f64]| {
            let s = sys.unpack(v);
            let l = sys.resolve(&sys.linear(&s));
            let lv = sys.pack(&l);
            v.iter().zip(&lv).map(|(a, c)| a - lambda * c).collect::<Vec<f64>>()
        };
        let target = (KRYLOV_FRACTION * update_norm).max(1e-3 * params.tol);
        let out = gmres(apply, &b, &mut x, &weights, target, KRYLOV_RESTART, KRYLOV_MAX);
        r.krylov_iters = out.iterations;
        trace.rows.push(r);
        let v = sys.unpack(&x);
        let next = state.scaled(1.0 - alpha).axpy(alpha, &v);
        state = State { u: crate::operators::leray_project(&next.u), omega: next.omega };
        log::debug!("iter {iter}: update {update_norm:.3e}, krylov {} -> {:.3e}", out.iterations, out.residual);
    }
    unreachable!()
}

/// `||U - lambda T(U)||_E` for a candidate state.
pub fn fixed_point_defect(params: &SolverParams, state: &State) -> crate::Result<f64> {
    let sys = System::new(params)?;
    let t = sys.apply_t(state)?.scaled(params.lambda);
    let d = state.axpy(-1.0, &t);
    Ok(e_norm(&d.u, params.epsilon) + e_norm(&d.omega, params.epsilon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::divergence;
    use crate::spectral::{Grid, VectorField};

    fn small(g: Grid) -> SolverParams {
        let mut p = SolverParams::new(g);
        p.radius = 1.0;
        p.damping = 1.0;
        p
    }

    #[test]
    fn unforced_zero_converges_immediately() {
        let g = Grid::new(16, 1.0).unwrap();
        let (s, trace) = picard_solve(&small(g), State::zeros(g)).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(s.h1_norm(), 0.0);
    }

    #[test]
    fn unforced_small_state_collapses() {
        let g = Grid::new(16, 1.0).unwrap();
        let (s, trace) = picard_solve(&small(g), State::random(g, 1, 1e-2)).unwrap();
        assert!(s.h1_norm() < 1e-8, "{}", s.h1_norm());
        assert!(trace.len() < 20);
    }

    #[test]
    fn forced_fixed_point_satisfies_post_condition() {
        let g = Grid::new(16, 2.0).unwrap();
        let f = VectorField::from_fn(g, |x| [0.0, 0.0, 1e-2 * (x[0] / 2.0).sin()]);
        let mut p = small(g).with_forcing(f, VectorField::zeros(g)).unwrap();
        p.tol = 1e-12;
        let (s, trace) = picard_solve(&p, State::zeros(g)).unwrap();
        assert!(fixed_point_defect(&p, &s).unwrap() < 1e-12);
        let last = trace.last().unwrap();
        assert!(last.energy_gap < 1e-8, "{}", last.energy_gap);
        assert!(last.r_mom < 1e-9 && last.r_mic < 1e-9, "{last:?}");
        let div = sobolev_norm(&divergence(&s.u), 0.0).unwrap() / sobolev_norm(&s.u, 0.0).unwrap();
        assert!(div < 1e-10);
    }

    #[test]
    fn oversized_forcing_blows_up() {
        let g = Grid::new(16, 2.0).unwrap();
        let f = VectorField::from_fn(g, |x| [0.0, 0.0, 1e7 * (x[0] / 2.0).sin()]);
        let p = small(g).with_forcing(f, VectorField::zeros(g)).unwrap();
        let err = picard_solve(&p, State::zeros(g)).unwrap_err();
        assert!(matches!(err.failure, SolveFailure::BlowUp { .. }), "{err}");
        assert!(!err.trace.is_empty());
    }
}
