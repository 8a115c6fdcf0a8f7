use crate::error::{Error, Result};
use crate::operators::{curl, divergence, skew_advection};
use crate::solver::{SolverParams, State, System, Terms};
use crate::spectral::{inner_product, sobolev_norm, Field, VectorField};

use super::report::{relative_gap, term, LedgerReport};

fn dot3(a: &[Vec<f64>], b: &[Vec<f64>], weight: &[f64]) -> f64 {
    (0..weight.len()).map(|p| weight[p] * (a[0][p] * b[0][p] + a[1][p] * b[1][p] + a[2][p] * b[2][p])).sum()
}

/// Term-by-term energy identity of the mollified problem `U = lambda T(U)`.
///
/// Left: `eps(|u|_{H2}^2 + |w|_{H2}^2) + |u|_{H1}^2 + |w|_{H1}^2 +
/// lambda sum theta (div w)^2 + lambda kappa sum theta^2 |w|^2`.
/// Right: the two halves of the curl coupling, the two advection pairings
/// and the forcing work. Pointwise integrals are grid sums on the solver's
/// collocation grid, so the identity holds to round-off at a fixed point.
pub fn energy_ledger(state: &State, params: &SolverParams, lambda: f64) -> Result<LedgerReport> {
    if state.grid() != params.grid() {
        return Err(Error::GridMismatch);
    }
    let sys = System::new(params)?;
    energy_ledger_with(&sys, state, lambda)
}

fn energy_ledger_with(sys: &System, state: &State, lambda: f64) -> Result<LedgerReport> {
    let eps = sys.epsilon();
    let u = state.u.dealiased();
    let w = state.omega.dealiased();
    let cu = curl(&u);
    let cw = curl(&w);
    let du = divergence(&u);
    let dw = divergence(&w);
    let mut comps = u.components();
    comps.extend(w.components());
    comps.extend(cu.components());
    comps.extend(cw.components());
    comps.push(du.coefficients());
    comps.push(dw.coefficients());
    let col = sys.collocation();
    let phys = col.to_fine(&comps);
    let (up, wp, cup, cwp) = (&phys[0..3], &phys[3..6], &phys[6..9], &phys[9..12]);
    let (div_u, div_w) = (&phys[12], &phys[13]);
    let theta = sys.theta();
    let theta2: Vec<f64> = theta.iter().map(|t| t * t).collect();
    let cell = col.fine().cell_volume();

    let ku = skew_advection(col, up, div_u, up, theta);
    let kw = skew_advection(col, up, div_u, wp, theta);
    let ones = vec![1.0; theta.len()];

    let sq = |s: f64| sobolev_norm(&u, s).unwrap().powi(2) + sobolev_norm(&w, s).unwrap().powi(2);
    let div_term: f64 = theta.iter().zip(div_w).map(|(t, d)| t * d * d).sum::<f64>() * cell;
    let damp_term = dot3(wp, wp, &theta2) * cell;
    let left = eps * sq(2.0) + sq(1.0) + lambda * div_term + lambda * sys.kappa() * damp_term;

    let (f, g) = sys.forcing();
    let terms = vec![
        term("coupling_curl_w_u", 0.5 * lambda * dot3(cwp, up, &theta2) * cell, None),
        term("coupling_curl_u_w", 0.5 * lambda * dot3(cup, wp, &theta2) * cell, None),
        term("advection_u", -lambda * dot3(&ku, up, &ones) * cell, None),
        term("advection_w", -lambda * dot3(&kw, wp, &ones) * cell, None),
        term("forcing_f", lambda * inner_product(f, &u)?, None),
        term("forcing_g", lambda * inner_product(g, &w)?, None),
    ];
    let report = LedgerReport::new(None, left, terms);
    if !report.is_finite() {
        return Err(Error::NonFinite("energy ledger"));
    }
    Ok(report)
}

/// The same balance from the solver's band-limited pieces via spectral pairings.
pub(crate) fn spectral_energy_gap(sys: &System, state: &State, t: &Terms, lambda: f64) -> f64 {
    let (u, w) = (&state.u, &state.omega);
    let ip = |a: &VectorField, b: &VectorField| inner_product(a, b).unwrap();
    let sq = |s: f64| sobolev_norm(u, s).unwrap().powi(2) + sobolev_norm(w, s).unwrap().powi(2);
    let left = sys.epsilon() * sq(2.0) + sq(1.0) - lambda * ip(&t.grad_div, w) + lambda * sys.kappa() * ip(&t.damping, w);
    let (f, g) = sys.forcing();
    let right = lambda
        * (0.5 * ip(&t.coupling_u, u) + 0.5 * ip(&t.coupling_w, w) - ip(&t.advection_u, u) - ip(&t.advection_w, w)
            + ip(f, u)
            + ip(g, w));
    relative_gap(left, right)
}
