use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::operators::leray_project;
use crate::spectral::{lattice_index_checked, sobolev_norm, Grid, VectorField};

type C = Complex64;

fn unit_transverse(mode: [i64; 3], direction: [f64; 3]) -> Result<[f64; 3]> {
    let k = mode.map(|v| v as f64);
    let k2: f64 = k.iter().map(|v| v * v).sum();
    if k2 == 0.0 {
        return Err(invalid("mode", "must be nonzero"));
    }
    let dot: f64 = (0..3).map(|i| k[i] * direction[i]).sum();
    let d: Vec<f64> = (0..3).map(|i| direction[i] - dot * k[i] / k2).collect();
    let n = d.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(n > 1e-12) {
        return Err(invalid("direction", "must not be parallel to the mode"));
    }
    Ok([d[0] / n, d[1] / n, d[2] / n])
}

/// `a e sin(xi_k . x)` with `e` the part of `direction` transverse to `k`,
/// scaled so that `||f||_{H^-1} = hm1_norm`.
pub fn single_mode_forcing(grid: Grid, mode: [i64; 3], direction: [f64; 3], hm1_norm: f64) -> Result<VectorField> {
    if !(hm1_norm >= 0.0 && hm1_norm.is_finite()) {
        return Err(invalid("hm1_norm", "must be finite and >= 0"));
    }
    let e = unit_transverse(mode, direction)?;
    let plus = lattice_index_checked(&grid, mode).ok_or_else(|| invalid("mode", "must lie strictly inside the lattice"))?;
    let minus = lattice_index_checked(&grid, mode.map(|v| -v)).unwrap();
    let mut comps: [Vec<C>; 3] = std::array::from_fn(|_| vec![C::new(0.0, 0.0); grid.len()]);
    for i in 0..3 {
        comps[i][plus] = C::new(0.0, -0.5 * e[i]);
        comps[i][minus] = C::new(0.0, 0.5 * e[i]);
    }
    let f = VectorField::from_coefficients(grid, comps)?;
    let norm = sobolev_norm(&f, -1.0)?;
    Ok(f.scaled(hm1_norm / norm))
}

/// Leray projection of `direction exp(-|x - center|^2 / width^2)`, scaled to `||f||_{H^-1} = hm1_norm`.
pub fn gaussian_bump_forcing(grid: Grid, center: [f64; 3], width: f64, direction: [f64; 3], hm1_norm: f64) -> Result<VectorField> {
    if !(width > 0.0 && width.is_finite()) {
        return Err(invalid("width", "must be positive"));
    }
    if !(hm1_norm >= 0.0 && hm1_norm.is_finite()) {
        return Err(invalid("hm1_norm", "must be finite and >= 0"));
    }
    let raw = VectorField::from_fn(grid, |x| {
        let r2: f64 = (0..3).map(|i| (x[i] - center[i]).powi(2)).sum();
        let a = (-r2 / (width * width)).exp();
        [a * direction[0], a * direction[1], a * direction[2]]
    });
    let f = leray_project(&raw.dealiased());
    let norm = sobolev_norm(&f, -1.0)?;
    if norm == 0.0 {
        return Err(invalid("direction", "must be nonzero"));
    }
    Ok(f.scaled(hm1_norm / norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::divergence;

    #[test]
    fn single_mode_is_a_sine() {
        let l = 2.0;
        let g = Grid::new(16, l).unwrap();
        let f = single_mode_forcing(g, [2, 0, 0], [0.0, 0.0, 1.0], 1.0).unwrap();
        let a = f.coefficient_amplitude();
        let expected = VectorField::from_fn(g, |x| [0.0, 0.0, a * (x[0]).sin()]);
        assert!(sobolev_norm(&(&f - &expected), 0.0).unwrap() < 1e-12 * a);
        assert!((sobolev_norm(&f, -1.0).unwrap() - 1.0).abs() < 1e-14);
        let xi = 2.0 / l;
        assert!((sobolev_norm(&f, 0.0).unwrap() - xi).abs() < 1e-13);
    }

    #[test]
    fn direction_is_made_transverse() {
        let g = Grid::new(16, 1.0).unwrap();
        let f = single_mode_forcing(g, [1, 1, 0], [1.0, 0.0, 0.0], 0.1).unwrap();
        assert!(sobolev_norm(&divergence(&f), 0.0).unwrap() < 1e-14);
        assert!(single_mode_forcing(g, [1, 0, 0], [2.0, 0.0, 0.0], 0.1).is_err());
        assert!(single_mode_forcing(g, [8, 0, 0], [0.0, 1.0, 0.0], 0.1).is_err());
    }

    #[test]
    fn bump_is_solenoidal_and_normalized() {
        let g = Grid::new(16, 1.0).unwrap();
        let f = gaussian_bump_forcing(g, [0.2, 0.0, -0.1], 0.8, [0.0, 0.0, 1.0], 0.5).unwrap();
        assert!(sobolev_norm(&divergence(&f), 0.0).unwrap() < 1e-12 * sobolev_norm(&f, 0.0).unwrap());
        assert!((sobolev_norm(&f, -1.0).unwrap() - 0.5).abs() < 1e-13);
    }

    trait Amplitude {
        fn coefficient_amplitude(&self) -> f64;
    }

    impl Amplitude for VectorField {
        fn coefficient_amplitude(&self) -> f64 {
            2.0 * self.component(2).coefficient([2, 0, 0]).im.abs()
        }
    }
}
