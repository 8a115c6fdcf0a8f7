use serde::{Deserialize, Serialize};

use super::fft;
use super::field::{Field, Samples};
use crate::error::{invalid, Error, Result};

/// Integration region for Lebesgue norms, centred at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Region {
    All,
    /// `|x| <= R`.
    Ball(f64),
    /// `R <= |x| <= 2R`.
    Annulus(f64),
}

impl Region {
    /// Inner and outer radius; `None` for the whole box.
    pub fn bounds(&self) -> Option<(f64, f64)> {
        match *self {
            Region::All => None,
            Region::Ball(r) => Some((0.0, r)),
            Region::Annulus(r) => Some((r, 2.0 * r)),
        }
    }

    pub fn contains(&self, radius: f64) -> bool {
        match self.bounds() {
            None => true,
            Some((lo, hi)) => radius >= lo && radius <= hi,
        }
    }

    pub(crate) fn check_inside(&self, limit: f64) -> Result<()> {
        if let Some((lo, hi)) = self.bounds() {
            if !(lo >= 0.0 && hi.is_finite()) {
                return Err(invalid("region radius", "must be finite and nonnegative"));
            }
            if hi > limit * (1.0 + 1e-12) {
                return Err(Error::OutsideBox { radius: hi, limit });
            }
        }
        Ok(())
    }
}

/// Squared homogeneous Sobolev norm without the square root.
pub(crate) fn sobolev_sq(field: &(impl Field + ?Sized), s: f64) -> f64 {
    let grid = field.grid();
    let xi2 = grid.xi_squared();
    let mut total = 0.0;
    for comp in field.components() {
        if s == 0.0 {
            total += comp.iter().map(|z| z.norm_sqr()).sum::<f64>();
        } else {
            for (idx, z) in comp.iter().enumerate().skip(1) {
                total += xi2[idx].powf(s) * z.norm_sqr();
            }
        }
    }
    total * grid.volume()
}

/// `(2 pi L)^3 sum |xi|^{2s} |u_k|^2` square-rooted; the zero mode counts only at `s = 0`.
pub fn sobolev_norm(field: &(impl Field + ?Sized), s: f64) -> Result<f64> {
    if !s.is_finite() {
        return Err(invalid("s", "must be finite"));
    }
    if s < -2.0 {
        return Err(invalid("s", "must be >= -2"));
    }
    Ok(sobolev_sq(field, s).sqrt())
}

/// `(2 pi L)^3 Re sum a_k conj(b_k)`, the L2 pairing.
pub fn inner_product<F: Field + ?Sized>(a: &F, b: &F) -> Result<f64> {
    let grid = a.grid();
    if grid != b.grid() {
        return Err(Error::GridMismatch);
    }
    let mut total = 0.0;
    for (ca, cb) in a.components().into_iter().zip(b.components()) {
        total += ca.iter().zip(cb).map(|(x, y)| (x * y.conj()).re).sum::<f64>();
    }
    Ok(total * grid.volume())
}

/// Pointwise Euclidean magnitude of a field on a grid refined `factor` times.
pub fn magnitude_samples(field: &(impl Field + ?Sized), factor: usize) -> Samples {
    let grid = field.grid();
    let fine = grid.refined(factor.max(1));
    let padded: Vec<_> = field.components().into_iter().map(|c| fft::pad(c, grid.n(), fine.n())).collect();
    let refs: Vec<_> = padded.iter().map(|c| c.as_slice()).collect();
    let phys = fft::to_real_each(fine.n(), &refs);
    let values = (0..fine.len()).map(|i| phys.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt()).collect();
    Samples { grid: fine, values }
}

/// Trapezoid `L^p` norm of nonnegative samples over `region`.
///
/// Returns `Ok(None)` when the region holds no sample point.
pub(crate) fn lebesgue_of_samples(samples: &Samples, p: f64, region: Region) -> Result<Option<f64>> {
    if !(p >= 1.0) {
        return Err(invalid("p", "must be in [1, inf]"));
    }
    let grid = samples.grid;
    region.check_inside(grid.box_radius())?;
    let radii = grid.radii();
    let mut count = 0usize;
    let mut acc = 0.0f64;
    for (v, r) in samples.values.iter().zip(&radii) {
        if !region.contains(*r) {
            continue;
        }
        count += 1;
        let a = v.abs();
        if p.is_infinite() {
            acc = acc.max(a);
        } else {
            acc += a.powf(p);
        }
    }
    if count == 0 {
        return Ok(None);
    }
    Ok(Some(if p.is_infinite() { acc } else { (acc * grid.cell_volume()).powf(1.0 / p) }))
}

/// Trapezoid `L^p` norm of given samples; empty regions give 0 with a warning.
pub fn lebesgue_norm_samples(samples: &Samples, p: f64, region: Region) -> Result<f64> {
    match lebesgue_of_samples(samples, p, region)? {
        Some(v) => Ok(v),
        None => {
            log::warn!("region {region:?} contains no grid points; norm reported as 0");
            Ok(0.0)
        }
    }
}

/// Trapezoid `L^p` norm of `|field|` on the field's own grid.
pub fn lebesgue_norm(field: &(impl Field + ?Sized), p: f64, region: Region) -> Result<f64> {
    lebesgue_norm_samples(&magnitude_samples(field, 1), p, region)
}

/// As [`lebesgue_norm`], with samples spectrally interpolated onto a refined grid.
pub fn lebesgue_norm_refined(field: &(impl Field + ?Sized), p: f64, region: Region, factor: usize) -> Result<f64> {
    lebesgue_norm_samples(&magnitude_samples(field, factor), p, region)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::spectral::{Grid, ScalarField, VectorField};

    #[test]
    fn constant_volume() {
        let g = Grid::new(8, 1.5).unwrap();
        let one = ScalarField::from_fn(g, |_| 1.0);
        let v = lebesgue_norm(&one, 2.0, Region::All).unwrap();
        assert!((v - (2.0 * PI * 1.5f64).powf(1.5)).abs() < 1e-12 * v);
        assert!((sobolev_norm(&one, 0.0).unwrap() - v).abs() < 1e-12 * v);
        assert_eq!(sobolev_norm(&one, 1.0).unwrap(), 0.0);
        assert_eq!(sobolev_norm(&one, -1.0).unwrap(), 0.0);
    }

    #[test]
    fn shell_scaling() {
        let g = Grid::new(8, 1.0).unwrap();
        let f = ScalarField::from_fn(g, |x| (2.0 * x[1]).cos());
        let s0 = sobolev_norm(&f, 0.0).unwrap();
        let s1 = sobolev_norm(&f, 1.0).unwrap();
        assert!((s1 - 2.0 * s0).abs() < 1e-12 * s1);
    }

    #[test]
    fn rejects_bad_orders() {
        let g = Grid::new(8, 1.0).unwrap();
        let f = ScalarField::zeros(g);
        assert!(sobolev_norm(&f, f64::NAN).is_err());
        assert!(sobolev_norm(&f, -2.5).is_err());
        assert_eq!(sobolev_norm(&f, 0.7).unwrap(), 0.0);
    }

    #[test]
    fn region_errors_and_empty() {
        let g = Grid::new(8, 1.0).unwrap();
        let f = ScalarField::from_fn(g, |_| 1.0);
        assert!(matches!(lebesgue_norm(&f, 2.0, Region::Annulus(2.0)), Err(Error::OutsideBox { .. })));
        assert_eq!(lebesgue_norm(&f, 2.0, Region::Annulus(0.1)).unwrap(), 0.0);
        assert!(lebesgue_norm(&f, 0.5, Region::All).is_err());
    }

    #[test]
    fn sup_norm_is_max() {
        let g = Grid::new(16, 1.0).unwrap();
        let f = VectorField::from_fn(g, |x| [x[0].sin(), 0.0, x[1].cos()]);
        let m = lebesgue_norm(&f, f64::INFINITY, Region::All).unwrap();
        assert!(m <= 2f64.sqrt() + 1e-12 && m > 1.0);
    }

    #[test]
    fn inner_product_grid_mismatch() {
        let a = ScalarField::zeros(Grid::new(8, 1.0).unwrap());
        let b = ScalarField::zeros(Grid::new(8, 2.0).unwrap());
        assert_eq!(inner_product(&a, &b), Err(Error::GridMismatch));
    }
}
