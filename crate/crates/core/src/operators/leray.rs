use num_complex::Complex64;

use super::differential::frequencies;
use crate::spectral::VectorField;

type C = Complex64;

/// Removes the gradient part: `v - xi (xi . v) / |xi|^2` on every nonzero mode.
pub fn leray_project(v: &VectorField) -> VectorField {
    let grid = v.grid();
    let xi = frequencies(&grid);
    let [a, b, c] = v.comps();
    let mut out = [a.clone(), b.clone(), c.clone()];
    for k in 1..xi.len() {
        let x = xi[k];
        let x2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        if x2 == 0.0 {
            continue;
        }
        let dot: C = (x[0] * a[k] + x[1] * b[k] + x[2] * c[k]) / x2;
        for j in 0..3 {
            out[j][k] -= x[j] * dot;
        }
    }
    VectorField::from_raw(grid, out)
}
