use num_complex::Complex64;

use super::collocation::Collocation;
use super::cutoff::CutoffSpec;
use super::differential::divergence;
use crate::error::{Error, Result};
use crate::spectral::{Field, VectorField};

type C = Complex64;

fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

/// Physical-space kernel on the collocation grid.
///
/// With `w = theta b` it returns
/// `theta [ (a.D) w + D.(a (x) w) - (D.a) w ] / 2`, the skew-symmetric
/// form of `theta (a.grad)(theta b)`. `D` is the spectral derivative of
/// the collocation grid, which is antisymmetric under the grid sum, so
/// `sum theta K . b = 0` holds to round-off for any `a` with `D.a = 0`.
pub(crate) fn skew_advection(
    col: &Collocation,
    a: &[Vec<f64>],
    div_a: &[f64],
    b: &[Vec<f64>],
    theta: &[f64],
) -> Vec<Vec<f64>> {
    let m = theta.len();
    let w: Vec<Vec<f64>> = (0..3).map(|i| mul(&b[i], theta)).collect();
    let w_hat = col.fine_forward(&w);

    let mut out: Vec<Vec<f64>> = Vec::with_capacity(3);
    for wi in &w_hat {
        let d: Vec<Vec<C>> = (0..3).map(|j| col.fine_derivative(wi, j)).collect();
        let refs: Vec<&[C]> = d.iter().map(|c| c.as_slice()).collect();
        let dw = col.fine_inverse(&refs);
        out.push((0..m).map(|p| a[0][p] * dw[0][p] + a[1][p] * dw[1][p] + a[2][p] * dw[2][p]).collect());
    }

    let mut flux_div: Vec<Vec<C>> = Vec::with_capacity(3);
    for wi in &w {
        let flux: Vec<Vec<f64>> = (0..3).map(|j| mul(&a[j], wi)).collect();
        let fh = col.fine_forward(&flux);
        let xi = col.fine_xi();
        let i = C::new(0.0, 1.0);
        flux_div.push((0..fh[0].len()).map(|k| i * (xi[k][0] * fh[0][k] + xi[k][1] * fh[1][k] + xi[k][2] * fh[2][k])).collect());
    }
    let refs: Vec<&[C]> = flux_div.iter().map(|c| c.as_slice()).collect();
    let div_flux = col.fine_inverse(&refs);

    for i in 0..3 {
        for p in 0..m {
            out[i][p] = 0.5 * theta[p] * (out[i][p] + div_flux[i][p] - div_a[p] * w[i][p]);
        }
    }
    out
}

/// `((theta a).grad)(theta b)` with products on the given collocation grid.
///
/// Inputs are dealiased first and the output lies in the 2/3-rule band.
pub fn mollified_advection_on(
    a: &VectorField,
    b: &VectorField,
    spec: &CutoffSpec,
    col: &Collocation,
) -> Result<VectorField> {
    let grid = a.grid();
    if b.grid() != grid || col.base() != grid {
        return Err(Error::GridMismatch);
    }
    let a = a.dealiased();
    let b = b.dealiased();
    let div_a = divergence(&a);
    let mut comps: Vec<&[C]> = a.components();
    comps.extend(b.components());
    comps.push(div_a.coefficients());
    let mut phys = col.to_fine(&comps);
    let div_phys = phys.pop().unwrap();
    let b_phys = phys.split_off(3);
    let theta = spec.sample(&col.fine());
    let k = skew_advection(col, &phys, &div_phys, &b_phys, &theta);
    let mut band = col.to_band(&k).into_iter();
    Ok(VectorField::from_raw(grid, [band.next().unwrap(), band.next().unwrap(), band.next().unwrap()]))
}

/// [`mollified_advection_on`] with products on the base grid (plain 2/3 rule).
pub fn mollified_advection(a: &VectorField, b: &VectorField, spec: &CutoffSpec) -> Result<VectorField> {
    mollified_advection_on(a, b, spec, &Collocation::new(a.grid(), 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{curl, leray_project};
    use crate::spectral::random::gaussian_vector;
    use crate::spectral::{inner_product, sobolev_norm, Grid};

    #[test]
    fn zero_transport() {
        let g = Grid::new(16, 2.0).unwrap();
        let b = gaussian_vector(g, 1);
        let spec = CutoffSpec::theta(1.5).unwrap();
        let out = mollified_advection(&VectorField::zeros(g), &b, &spec).unwrap();
        assert!(sobolev_norm(&out, 0.0).unwrap() < 1e-14 * sobolev_norm(&b, 1.0).unwrap());
    }

    #[test]
    fn nullity_on_both_collocations() {
        let g = Grid::new(16, 2.0).unwrap();
        let u = leray_project(&gaussian_vector(g, 5));
        let w = gaussian_vector(g, 6);
        let spec = CutoffSpec::theta(1.2).unwrap();
        for factor in [1, 2] {
            let col = Collocation::new(g, factor);
            let mu = mollified_advection_on(&u, &u, &spec, &col).unwrap();
            let mw = mollified_advection_on(&u, &w, &spec, &col).unwrap();
            let su = sobolev_norm(&mu, 0.0).unwrap() * sobolev_norm(&u, 0.0).unwrap();
            let sw = sobolev_norm(&mw, 0.0).unwrap() * sobolev_norm(&w, 0.0).unwrap();
            assert!(inner_product(&mu, &u).unwrap().abs() < 1e-13 * su);
            assert!(inner_product(&mw, &w).unwrap().abs() < 1e-13 * sw);
        }
    }

    #[test]
    fn matches_plain_transport_for_wide_cutoff() {
        // Inside the plateau theta = 1 the kernel reduces to (a.grad) b.
        let l = 4.0;
        let g = Grid::new(32, l).unwrap();
        let a = VectorField::from_fn(g, |x| [(x[1] / l).sin(), 0.0, 0.0]);
        let b = VectorField::from_fn(g, |x| [0.0, (x[0] / l).cos(), 0.0]);
        let spec = CutoffSpec::theta(100.0).unwrap();
        let out = mollified_advection(&a, &b, &spec).unwrap();
        let expected = VectorField::from_fn(g, |x| [0.0, -(x[1] / l).sin() * (x[0] / l).sin() / l, 0.0]);
        assert!(sobolev_norm(&(&out - &expected), 0.0).unwrap() < 1e-12);
        let c = curl(&a);
        assert!(c.is_finite());
    }
}
