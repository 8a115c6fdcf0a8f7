use crate::error::{Error, Result};
use crate::operators::{
    curl, divergence, gradient, laplacian_vector, leray_project, pressure_from_velocity, skew_advection, Collocation,
};
use crate::solver::{SolverParams, State, System, Terms};
use crate::spectral::{sobolev_norm, Field, ScalarField, VectorField};

use super::report::ResidualReport;

/// Which form of the equations the residual is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualMode {
    /// The unregularized stationary system with pressure.
    Original,
    /// The projected, hyperviscous system with cutoffs.
    Mollified,
}

fn l2(v: &VectorField) -> f64 {
    sobolev_norm(v, 0.0).unwrap()
}

fn mean_free(v: &VectorField) -> VectorField {
    v.map_components(|_, k, z| if k == 0 { z * 0.0 } else { z })
}

fn relative(residual: &VectorField, parts: &[f64]) -> f64 {
    let scale = parts.iter().copied().fold(0.0, f64::max);
    if scale == 0.0 {
        0.0
    } else {
        l2(residual) / scale
    }
}

/// `(a.grad) b` pseudo-spectrally with the 2/3 rule, in skew-symmetric form.
pub fn transport(a: &VectorField, b: &VectorField) -> VectorField {
    let grid = a.grid();
    let col = Collocation::new(grid, 1);
    let a = a.dealiased();
    let b = b.dealiased();
    let da = divergence(&a);
    let mut comps = a.components();
    comps.extend(b.components());
    comps.push(da.coefficients());
    let mut phys = col.to_fine(&comps);
    let div_a = phys.pop().unwrap();
    let b_phys = phys.split_off(3);
    let ones = vec![1.0; col.fine().len()];
    let k = skew_advection(&col, &phys, &div_a, &b_phys, &ones);
    let mut band = col.to_band(&k).into_iter();
    VectorField::from_raw(grid, [band.next().unwrap(), band.next().unwrap(), band.next().unwrap()])
}

/// Mollified-system residuals from precomputed right-hand-side pieces.
///
/// The hyperviscous operator annihilates constants, so the residual is
/// taken modulo the zero mode.
pub(crate) fn mollified_from_terms(sys: &System, state: &State, t: &Terms, lambda: f64) -> ResidualReport {
    let au = sys.forward(state);
    let (f, g) = sys.forcing();
    let adv_u = leray_project(&t.advection_u);
    let cpl_u = leray_project(&(&t.coupling_u * 0.5));
    let rhs_u = &(&cpl_u - &adv_u) + f;
    let r_u = mean_free(&(&(&rhs_u * lambda) - &au.u));
    let r_mom = relative(&r_u, &[l2(&au.u), lambda * l2(&adv_u), lambda * l2(&cpl_u), lambda * l2(f)]);

    let damp = &t.damping * sys.kappa();
    let cpl_w = &t.coupling_w * 0.5;
    let rhs_w = &(&(&(&t.grad_div - &t.advection_w) - &damp) + &cpl_w) + g;
    let r_w = mean_free(&(&(&rhs_w * lambda) - &au.omega));
    let parts = [l2(&au.omega), lambda * l2(&t.grad_div), lambda * l2(&t.advection_w), lambda * l2(&damp), lambda * l2(&cpl_w), lambda * l2(g)];
    ResidualReport { r_mom, r_mic: relative(&r_w, &parts) }
}

/// Relative `L^2` residuals of both equations at `state`.
///
/// The original mode uses `p` when given and otherwise recovers it from `u`;
/// the mollified mode is pressure-free and uses `lambda` from `params`.
pub fn residuals(state: &State, p: Option<&ScalarField>, params: &SolverParams, mode: ResidualMode) -> Result<ResidualReport> {
    if state.grid() != params.grid() {
        return Err(Error::GridMismatch);
    }
    match mode {
        ResidualMode::Mollified => {
            let sys = System::new(params)?;
            let t = sys.terms(state);
            Ok(mollified_from_terms(&sys, state, &t, params.lambda))
        }
        ResidualMode::Original => {
            let (u, w) = (&state.u, &state.omega);
            let owned;
            let p = match p {
                Some(p) if p.grid() == u.grid() => p,
                Some(_) => return Err(Error::GridMismatch),
                None => {
                    owned = pressure_from_velocity(u);
                    &owned
                }
            };
            let f = &params.f;
            let g = &params.g;
            let lap_u = laplacian_vector(u);
            let adv_u = transport(u, u);
            let grad_p = gradient(p);
            let cpl_u = &curl(w) * 0.5;
            let r_u = &(&(&(&lap_u - &adv_u) - &grad_p) + &cpl_u) + f;
            let r_mom = relative(&r_u, &[l2(&lap_u), l2(&adv_u), l2(&grad_p), l2(&cpl_u), l2(f)]);

            let lap_w = laplacian_vector(w);
            let gd = gradient(&divergence(w));
            let damp = w * params.kappa;
            let adv_w = transport(u, w);
            let cpl_w = &curl(u) * 0.5;
            let r_w = &(&(&(&(&lap_w + &gd) - &damp) - &adv_w) + &cpl_w) + g;
            let parts = [l2(&lap_w), l2(&gd), l2(&damp), l2(&adv_w), l2(&cpl_w), l2(g)];
            Ok(ResidualReport { r_mom, r_mic: relative(&r_w, &parts) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn zero_state_has_zero_residuals() {
        let g = Grid::new(16, 1.0).unwrap();
        let mut p = SolverParams::new(g);
        p.radius = 1.0;
        for mode in [ResidualMode::Original, ResidualMode::Mollified] {
            let r = residuals(&State::zeros(g), None, &p, mode).unwrap();
            assert_eq!((r.r_mom, r.r_mic), (0.0, 0.0));
        }
    }

    #[test]
    fn random_state_is_not_a_solution() {
        let g = Grid::new(16, 1.0).unwrap();
        let mut p = SolverParams::new(g);
        p.radius = 1.0;
        let s = State::random(g, 3, 1.0);
        for mode in [ResidualMode::Original, ResidualMode::Mollified] {
            let r = residuals(&s, None, &p, mode).unwrap();
            assert!(r.r_mom > 0.1 && r.r_mic > 0.1);
        }
    }

    #[test]
    fn transport_of_shear() {
        let l = 2.0;
        let g = Grid::new(16, l).unwrap();
        let a = VectorField::from_fn(g, |x| [(x[1] / l).sin(), 0.0, 0.0]);
        let b = VectorField::from_fn(g, |x| [0.0, 0.0, (x[0] / l).cos()]);
        let out = transport(&a, &b);
        let expected = VectorField::from_fn(g, |x| [0.0, 0.0, -(x[1] / l).sin() * (x[0] / l).sin() / l]);
        assert!(l2(&(&out - &expected)) < 1e-12);
    }
}
