use crate::error::{Error, Result};
use crate::operators::{divergence, leray_project, mollified_advection_on, Collocation, CutoffSpec};
use crate::spectral::{inner_product, sobolev_norm, VectorField};

use super::sampling::REFINE;

/// `||div u||_{L^2} / ||u||_{H^1}`, zero for the zero field.
pub fn relative_divergence(u: &VectorField) -> f64 {
    let h1 = sobolev_norm(u, 1.0).unwrap();
    if h1 == 0.0 {
        return 0.0;
    }
    sobolev_norm(&divergence(u), 0.0).unwrap() / h1
}

fn h1_full(v: &VectorField) -> f64 {
    (sobolev_norm(v, 0.0).unwrap().powi(2) + sobolev_norm(v, 1.0).unwrap().powi(2)).sqrt()
}

/// `|<P[(theta u.grad)(theta u)], u>| / ||u||_{H^1}^3` and
/// `|<(theta u.grad)(theta w), w>| / (||u||_{H^1} ||w||_{H^1}^2)`.
///
/// Both pairings use the solver's advection kernel with products on a
/// grid refined twice.
pub fn trilinear_nullity(u: &VectorField, omega: &VectorField, spec: &CutoffSpec) -> Result<(f64, f64)> {
    let grid = u.grid();
    if omega.grid() != grid {
        return Err(Error::GridMismatch);
    }
    spec.check_in_box(&grid)?;
    let rel = relative_divergence(u);
    if rel > 1e-10 {
        return Err(Error::NotSolenoidal(rel));
    }
    let col = Collocation::new(grid, REFINE);
    let ku = leray_project(&mollified_advection_on(u, u, spec, &col)?);
    let kw = mollified_advection_on(u, omega, spec, &col)?;
    let (nu, nw) = (h1_full(u), h1_full(omega));
    let ratio = |num: f64, den: f64| if den == 0.0 { 0.0 } else { num.abs() / den };
    let a = ratio(inner_product(&ku, u)?, nu.powi(3));
    let b = ratio(inner_product(&kw, omega)?, nu * nw * nw);
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::NonFinite("trilinear nullity"));
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::random::gaussian_vector;
    use crate::spectral::Grid;

    #[test]
    fn zero_velocity() {
        let g = Grid::new(16, 1.0).unwrap();
        let spec = CutoffSpec::theta(1.0).unwrap();
        let w = gaussian_vector(g, 4);
        assert_eq!(trilinear_nullity(&VectorField::zeros(g), &w, &spec).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn random_fields_are_null() {
        let g = Grid::new(16, 1.0).unwrap();
        let spec = CutoffSpec::theta(1.2).unwrap();
        let u = leray_project(&gaussian_vector(g, 1));
        let w = gaussian_vector(g, 2);
        let (a, b) = trilinear_nullity(&u, &w, &spec).unwrap();
        assert!(a < 1e-8 && b < 1e-8, "{a:e} {b:e}");
    }

    #[test]
    fn rejects_compressible_velocity() {
        let g = Grid::new(16, 1.0).unwrap();
        let spec = CutoffSpec::theta(1.0).unwrap();
        let u = VectorField::from_fn(g, |x| [x[0].sin(), 0.0, 0.0]);
        assert!(matches!(trilinear_nullity(&u, &u, &spec), Err(Error::NotSolenoidal(_))));
    }
}
