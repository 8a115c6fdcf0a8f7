use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{AnyField, Grid, ScalarField, VectorField};

type C = Complex64;
const I: C = C::new(0.0, 1.0);

/// `xi` vector for every lattice index, in storage order.
pub(crate) fn frequencies(grid: &Grid) -> Vec<[f64; 3]> {
    let f = grid.axis_frequencies();
    let n = grid.n();
    let mut out = Vec::with_capacity(grid.len());
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                out.push([f[a], f[b], f[c]]);
            }
        }
    }
    out
}

/// `i xi_axis c_k` for one component.
pub(crate) fn derivative(coeffs: &[C], xi: &[[f64; 3]], axis: usize) -> Vec<C> {
    coeffs.iter().zip(xi).map(|(&z, x)| I * x[axis] * z).collect()
}

pub fn gradient(f: &ScalarField) -> VectorField {
    let xi = frequencies(&f.grid());
    let c = f.coefficients();
    VectorField::from_raw(f.grid(), std::array::from_fn(|j| derivative(c, &xi, j)))
}

pub fn divergence(v: &VectorField) -> ScalarField {
    let xi = frequencies(&v.grid());
    let [a, b, c] = v.comps();
    let out = (0..xi.len()).map(|k| I * (xi[k][0] * a[k] + xi[k][1] * b[k] + xi[k][2] * c[k])).collect();
    ScalarField::from_raw(v.grid(), out)
}

pub fn curl(v: &VectorField) -> VectorField {
    let xi = frequencies(&v.grid());
    let [a, b, c] = v.comps();
    let mut out = [Vec::with_capacity(xi.len()), Vec::with_capacity(xi.len()), Vec::with_capacity(xi.len())];
    for k in 0..xi.len() {
        let x = xi[k];
        out[0].push(I * (x[1] * c[k] - x[2] * b[k]));
        out[1].push(I * (x[2] * a[k] - x[0] * c[k]));
        out[2].push(I * (x[0] * b[k] - x[1] * a[k]));
    }
    VectorField::from_raw(v.grid(), out)
}

pub fn laplacian_scalar(f: &ScalarField) -> ScalarField {
    let xi2 = f.grid().xi_squared();
    f.map_modes(|k, z| -xi2[k] * z)
}

pub fn laplacian_vector(v: &VectorField) -> VectorField {
    let xi2 = v.grid().xi_squared();
    v.map_components(|_, k, z| -xi2[k] * z)
}

/// Names the four differential operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Differential {
    Gradient,
    Divergence,
    Curl,
    Laplacian,
}

/// Arity-checked dispatch over [`Differential`].
pub fn differential(field: &AnyField, kind: Differential) -> Result<AnyField> {
    let mismatch = |op| Error::ArityMismatch { op, found: field.kind() };
    match (kind, field) {
        (Differential::Gradient, AnyField::Scalar(f)) => Ok(AnyField::Vector(gradient(f))),
        (Differential::Divergence, AnyField::Vector(v)) => Ok(AnyField::Scalar(divergence(v))),
        (Differential::Curl, AnyField::Vector(v)) => Ok(AnyField::Vector(curl(v))),
        (Differential::Laplacian, AnyField::Scalar(f)) => Ok(AnyField::Scalar(laplacian_scalar(f))),
        (Differential::Laplacian, AnyField::Vector(v)) => Ok(AnyField::Vector(laplacian_vector(v))),
        (Differential::Gradient, _) => Err(mismatch("gradient")),
        (Differential::Divergence, _) => Err(mismatch("divergence")),
        (Differential::Curl, _) => Err(mismatch("curl")),
    }
}
