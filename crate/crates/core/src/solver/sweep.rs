use rayon::prelude::*;
use serde::Serialize;

use super::params::SolverParams;
use super::picard::{picard_solve, SolveFailure};
use super::state::State;
use crate::error::{invalid, Result};
use crate::spectral::sobolev_norm;

/// Ratio above the `lambda = 1` reference at which a scan point is flagged.
pub const HOMOTOPY_FACTOR: f64 = 2.0;

/// `||f||_{H^-1}^2 + ||g||_{H^-1}^2`, the constant-free right side of the a-priori bound.
pub fn apriori_bound(params: &SolverParams) -> f64 {
    sobolev_norm(&params.f, -1.0).unwrap().powi(2) + sobolev_norm(&params.g, -1.0).unwrap().powi(2)
}

/// `eps(|u|_{H2}^2 + |w|_{H2}^2) + |u|_{H1}^2 + |w|_{H1}^2`.
pub fn apriori_left(state: &State, epsilon: f64) -> f64 {
    let sq = |s: f64| sobolev_norm(&state.u, s).unwrap().powi(2) + sobolev_norm(&state.omega, s).unwrap().powi(2);
    epsilon * sq(2.0) + sq(1.0)
}

/// One point of a homotopy scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomotopyPoint {
    pub lambda: f64,
    pub e_u: f64,
    pub e_w: f64,
    pub h1_u: f64,
    pub h1_w: f64,
    /// `apriori_left / apriori_bound`, when the bound is nonzero.
    pub ratio: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Set when `ratio` exceeds `HOMOTOPY_FACTOR` times the `lambda = 1` ratio.
    pub flagged: bool,
    pub failure: Option<String>,
}

/// Solves `U = lambda T(U)` from zero for each `lambda`, independently.
pub fn homotopy_scan(params: &SolverParams, lambdas: &[f64]) -> Result<Vec<HomotopyPoint>> {
    params.validate()?;
    if lambdas.iter().any(|l| !(0.0..=1.0).contains(l)) {
        return Err(invalid("lambda", "must be in [0,1]"));
    }
    let bound = apriori_bound(params);
    let run = |lambda: f64| {
        let mut p = params.clone();
        p.lambda = lambda;
        let grid = p.grid();
        let eps = p.epsilon;
        let (state, iterations, failure) = match picard_solve(&p, State::zeros(grid)) {
            Ok((s, t)) => (Some(s), t.len(), None),
            Err(e) => (e.last.clone(), e.trace.len(), Some(e.failure)),
        };
        let s = state.unwrap_or_else(|| State::zeros(grid));
        let ratio = (bound > 0.0).then(|| apriori_left(&s, eps) / bound);
        HomotopyPoint {
            lambda,
            e_u: super::state::e_norm(&s.u, eps),
            e_w: super::state::e_norm(&s.omega, eps),
            h1_u: sobolev_norm(&s.u, 1.0).unwrap(),
            h1_w: sobolev_norm(&s.omega, 1.0).unwrap(),
            ratio,
            iterations,
            converged: failure.is_none(),
            flagged: false,
            failure: failure.map(|f: SolveFailure| f.to_string()),
        }
    };
    let mut points: Vec<HomotopyPoint> = lambdas.par_iter().map(|&l| run(l)).collect();
    let reference = match points.iter().find(|p| p.lambda == 1.0) {
        Some(p) => p.ratio,
        None => run(1.0).ratio,
    };
    if let Some(r1) = reference {
        for p in points.iter_mut() {
            p.flagged = p.ratio.is_some_and(|r| r > HOMOTOPY_FACTOR * r1);
        }
    }
    Ok(points)
}

/// One cell of an `(eps, R)` continuation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuationCell {
    pub epsilon: f64,
    pub radius: f64,
    pub h1_u: f64,
    pub h1_w: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `||U - U_prev||_{H^1}` (sum over both fields) against the previous cell.
    pub h1_difference: Option<f64>,
    pub energy_gap: Option<f64>,
    pub failure: Option<String>,
    #[serde(skip)]
    pub state: Option<State>,
}

/// Warm-started solves for every `epsilon` (outer, descending) and `R` (inner, ascending).
pub fn continuation(params: &SolverParams, epsilons: &[f64], radii: &[f64]) -> Result<Vec<ContinuationCell>> {
    if epsilons.is_empty() || radii.is_empty() {
        return Err(invalid("continuation", "lists must be nonempty"));
    }
    if epsilons.windows(2).any(|w| w[1] > w[0]) {
        return Err(invalid("epsilon_list", "must be descending"));
    }
    if radii.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("R_list", "must be ascending"));
    }
    let grid = params.grid();
    let mut cells = Vec::new();
    let mut warm = State::zeros(grid);
    let mut previous: Option<State> = None;
    for &epsilon in epsilons {
        for &radius in radii {
            let mut p = params.clone();
            p.epsilon = epsilon;
            p.radius = radius;
            p.validate()?;
            let (state, iterations, gap, failure) = match picard_solve(&p, warm.clone()) {
                Ok((s, t)) => {
                    let gap = t.last().map(|r| r.energy_gap);
                    (Some(s), t.len(), gap, None)
                }
                Err(e) => (None, e.trace.len(), None, Some(e.failure.to_string())),
            };
            let h1_difference = match (&state, &previous) {
                (Some(s), Some(prev)) => Some(s.axpy(-1.0, prev).h1_norm()),
                _ => None,
            };
            let (h1_u, h1_w) = state.as_ref().map_or((f64::NAN, f64::NAN), |s| {
                (sobolev_norm(&s.u, 1.0).unwrap(), sobolev_norm(&s.omega, 1.0).unwrap())
            });
            if let Some(s) = &state {
                warm = s.clone();
                previous = Some(s.clone());
            }
            cells.push(ContinuationCell {
                epsilon,
                radius,
                h1_u,
                h1_w,
                iterations,
                converged: failure.is_none(),
                h1_difference,
                energy_gap: gap,
                failure,
                state,
            });
        }
    }
    Ok(cells)
}
