use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::fft;
use super::grid::Grid;
use crate::error::{Error, Result};

type C = Complex64;

/// Anything stored as Fourier coefficients on a [`Grid`].
pub trait Field {
    fn grid(&self) -> Grid;
    fn components(&self) -> Vec<&[C]>;
}

/// Real scalar field stored by its Fourier coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    coeffs: Vec<C>,
}

/// Real vector field stored by the Fourier coefficients of its three components.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: Grid,
    comps: [Vec<C>; 3],
}

/// Either arity, for operators that accept both.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyField {
    Scalar(ScalarField),
    Vector(VectorField),
}

/// Real samples on the points of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub grid: Grid,
    pub values: Vec<f64>,
}

fn check_len(grid: &Grid, len: usize) -> Result<()> {
    if len != grid.len() {
        return Err(Error::ShapeMismatch { expected: grid.len(), actual: len });
    }
    Ok(())
}

fn hermitian_defect(grid: &Grid, comps: &[&[C]]) -> f64 {
    let scale = comps.iter().flat_map(|c| c.iter()).map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst: f64 = 0.0;
    for c in comps {
        for idx in 0..grid.len() {
            worst = worst.max((c[grid.negated(idx)] - c[idx].conj()).norm());
        }
    }
    worst / scale
}

fn sample_fn<T>(grid: &Grid, f: impl Fn([f64; 3]) -> T) -> Vec<T> {
    let n = grid.n();
    let x: Vec<f64> = (0..n).map(|i| grid.coordinate(i)).collect();
    let mut out = Vec::with_capacity(grid.len());
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                out.push(f([x[a], x[b], x[c]]));
            }
        }
    }
    out
}

impl Samples {
    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> f64) -> Self {
        Self { values: sample_fn(&grid, f), grid }
    }
}

impl ScalarField {
    pub fn zeros(grid: Grid) -> Self {
        Self { coeffs: vec![C::new(0.0, 0.0); grid.len()], grid }
    }

    /// Wraps coefficients; Nyquist-plane entries are cleared.
    pub fn from_coefficients(grid: Grid, mut coeffs: Vec<C>) -> Result<Self> {
        check_len(&grid, coeffs.len())?;
        fft::zero_nyquist(grid.n(), &mut coeffs);
        Ok(Self { grid, coeffs })
    }

    /// Forward transform of physical samples.
    pub fn from_physical(grid: Grid, values: &[f64]) -> Result<Self> {
        check_len(&grid, values.len())?;
        Ok(Self { coeffs: fft::real_to_spectral(grid.n(), values), grid })
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> f64) -> Self {
        let values = sample_fn(&grid, f);
        Self { coeffs: fft::real_to_spectral(grid.n(), &values), grid }
    }

    /// Inverse transform to physical samples.
    pub fn to_physical(&self) -> Vec<f64> {
        fft::spectral_to_real(self.grid.n(), &self.coeffs)
    }

    /// Samples on a grid refined `factor` times by spectral interpolation.
    pub fn to_physical_refined(&self, factor: usize) -> Samples {
        let fine = self.grid.refined(factor);
        let padded = fft::pad(&self.coeffs, self.grid.n(), fine.n());
        Samples { grid: fine, values: fft::spectral_to_real(fine.n(), &padded) }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn coefficients(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coefficients(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of lattice wavenumber `k` (each component in `-n/2+1..=n/2`).
    pub fn coefficient(&self, k: [i64; 3]) -> C {
        self.coeffs[lattice_index(&self.grid, k)]
    }

    /// Largest `|c(-k) - conj c(k)|` relative to the largest coefficient.
    pub fn hermitian_defect(&self) -> f64 {
        hermitian_defect(&self.grid, &[&self.coeffs])
    }

    pub fn check_hermitian(&self, tol: f64) -> Result<()> {
        let d = self.hermitian_defect();
        if d > tol {
            return Err(Error::NotHermitian(d));
        }
        Ok(())
    }

    /// Keeps only modes inside the 2/3-rule band.
    pub fn dealiased(&self) -> Self {
        let mask = self.grid.dealias_mask();
        let coeffs = self.coeffs.iter().zip(&mask).map(|(&z, &m)| if m { z } else { C::new(0.0, 0.0) }).collect();
        Self { grid: self.grid, coeffs }
    }

    pub(crate) fn from_raw(grid: Grid, coeffs: Vec<C>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.len());
        Self { grid, coeffs }
    }

    pub(crate) fn map_modes(&self, f: impl Fn(usize, C) -> C) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(i, &z)| f(i, z)).collect();
        Self { grid: self.grid, coeffs }
    }

    pub fn scaled(&self, s: f64) -> Self {
        self.map_modes(|_, z| z * s)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Index of wavenumber `k`, or `None` on or beyond the Nyquist planes.
pub(crate) fn lattice_index_checked(grid: &Grid, k: [i64; 3]) -> Option<usize> {
    let half = grid.n() as i64 / 2;
    k.iter().all(|v| v.abs() < half).then(|| lattice_index(grid, k))
}

pub(crate) fn lattice_index(grid: &Grid, k: [i64; 3]) -> usize {
    let n = grid.n() as i64;
    let w = |k: i64| k.rem_euclid(n) as usize;
    grid.index(w(k[0]), w(k[1]), w(k[2]))
}

impl VectorField {
    pub fn zeros(grid: Grid) -> Self {
        let z = vec![C::new(0.0, 0.0); grid.len()];
        Self { comps: [z.clone(), z.clone(), z], grid }
    }

    pub fn from_coefficients(grid: Grid, comps: [Vec<C>; 3]) -> Result<Self> {
        let mut comps = comps;
        for c in comps.iter_mut() {
            check_len(&grid, c.len())?;
            fft::zero_nyquist(grid.n(), c);
        }
        Ok(Self { grid, comps })
    }

    pub fn from_components(parts: [ScalarField; 3]) -> Result<Self> {
        let grid = parts[0].grid;
        if parts.iter().any(|p| p.grid != grid) {
            return Err(Error::GridMismatch);
        }
        let [a, b, c] = parts;
        Ok(Self { grid, comps: [a.coeffs, b.coeffs, c.coeffs] })
    }

    pub fn from_physical(grid: Grid, values: [&[f64]; 3]) -> Result<Self> {
        for v in values {
            check_len(&grid, v.len())?;
        }
        let owned: Vec<Vec<f64>> = values.iter().map(|v| v.to_vec()).collect();
        let mut out = fft::to_spectral_each(grid.n(), &owned).into_iter();
        let comps = [out.next().unwrap(), out.next().unwrap(), out.next().unwrap()];
        Ok(Self { grid, comps })
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        let vals = sample_fn(&grid, f);
        let parts: Vec<Vec<f64>> = (0..3).map(|i| vals.iter().map(|v| v[i]).collect()).collect();
        let mut out = fft::to_spectral_each(grid.n(), &parts).into_iter();
        Self { grid, comps: [out.next().unwrap(), out.next().unwrap(), out.next().unwrap()] }
    }

    pub fn to_physical(&self) -> [Vec<f64>; 3] {
        let refs: Vec<&[C]> = self.comps.iter().map(|c| c.as_slice()).collect();
        let mut out = fft::to_real_each(self.grid.n(), &refs).into_iter();
        [out.next().unwrap(), out.next().unwrap(), out.next().unwrap()]
    }

    /// Pointwise magnitude `|v|` on a grid refined `factor` times.
    pub fn magnitude_refined(&self, factor: usize) -> Samples {
        let fine = self.grid.refined(factor);
        let padded: Vec<Vec<C>> = self.comps.iter().map(|c| fft::pad(c, self.grid.n(), fine.n())).collect();
        let refs: Vec<&[C]> = padded.iter().map(|c| c.as_slice()).collect();
        let phys = fft::to_real_each(fine.n(), &refs);
        let values = (0..fine.len())
            .map(|i| (phys[0][i] * phys[0][i] + phys[1][i] * phys[1][i] + phys[2][i] * phys[2][i]).sqrt())
            .collect();
        Samples { grid: fine, values }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn component(&self, i: usize) -> ScalarField {
        ScalarField { grid: self.grid, coeffs: self.comps[i].clone() }
    }

    pub fn coefficients(&self, i: usize) -> &[C] {
        &self.comps[i]
    }

    pub fn into_components(self) -> [Vec<C>; 3] {
        self.comps
    }

    pub fn hermitian_defect(&self) -> f64 {
        let refs: Vec<&[C]> = self.comps.iter().map(|c| c.as_slice()).collect();
        hermitian_defect(&self.grid, &refs)
    }

    pub fn check_hermitian(&self, tol: f64) -> Result<()> {
        let d = self.hermitian_defect();
        if d > tol {
            return Err(Error::NotHermitian(d));
        }
        Ok(())
    }

    pub fn dealiased(&self) -> Self {
        let mask = self.grid.dealias_mask();
        self.map_components(|_, idx, z| if mask[idx] { z } else { C::new(0.0, 0.0) })
    }

    pub(crate) fn from_raw(grid: Grid, comps: [Vec<C>; 3]) -> Self {
        Self { grid, comps }
    }

    pub(crate) fn comps(&self) -> &[Vec<C>; 3] {
        &self.comps
    }

    /// Applies `f(component, index, value)` to every coefficient.
    pub(crate) fn map_components(&self, f: impl Fn(usize, usize, C) -> C) -> Self {
        let comps = std::array::from_fn(|c| self.comps[c].iter().enumerate().map(|(i, &z)| f(c, i, z)).collect());
        Self { grid: self.grid, comps }
    }

    pub fn scaled(&self, s: f64) -> Self {
        self.map_components(|_, _, z| z * s)
    }

    /// `self + a * x`.
    pub fn axpy(&self, a: f64, x: &VectorField) -> Self {
        assert_eq!(self.grid, x.grid, "grid mismatch");
        self.map_components(|c, i, z| z + x.comps[c][i] * a)
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Field for ScalarField {
    fn grid(&self) -> Grid {
        self.grid
    }
    fn components(&self) -> Vec<&[C]> {
        vec![&self.coeffs]
    }
}

impl Field for VectorField {
    fn grid(&self) -> Grid {
        self.grid
    }
    fn components(&self) -> Vec<&[C]> {
        self.comps.iter().map(|c| c.as_slice()).collect()
    }
}

impl Field for AnyField {
    fn grid(&self) -> Grid {
        match self {
            AnyField::Scalar(s) => s.grid,
            AnyField::Vector(v) => v.grid,
        }
    }
    fn components(&self) -> Vec<&[C]> {
        match self {
            AnyField::Scalar(s) => s.components(),
            AnyField::Vector(v) => v.components(),
        }
    }
}

impl AnyField {
    pub fn kind(&self) -> &'static str {
        match self {
            AnyField::Scalar(_) => "scalar",
            AnyField::Vector(_) => "vector",
        }
    }
}

macro_rules! binary_ops {
    ($ty:ident) => {
        impl Add for &$ty {
            type Output = $ty;
            fn add(self, rhs: &$ty) -> $ty {
                zip_with(self, rhs, |a, b| a + b)
            }
        }
        impl Sub for &$ty {
            type Output = $ty;
            fn sub(self, rhs: &$ty) -> $ty {
                zip_with(self, rhs, |a, b| a - b)
            }
        }
        impl Mul<f64> for &$ty {
            type Output = $ty;
            fn mul(self, rhs: f64) -> $ty {
                self.scaled(rhs)
            }
        }
        impl Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                self.scaled(-1.0)
            }
        }
    };
}

trait ZipWith: Sized {
    fn zip(&self, other: &Self, f: impl Fn(C, C) -> C) -> Self;
}

impl ZipWith for ScalarField {
    fn zip(&self, other: &Self, f: impl Fn(C, C) -> C) -> Self {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect();
        Self { grid: self.grid, coeffs }
    }
}

impl ZipWith for VectorField {
    fn zip(&self, other: &Self, f: impl Fn(C, C) -> C) -> Self {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        self.map_components(|c, i, z| f(z, other.comps[c][i]))
    }
}

fn zip_with<T: ZipWith>(a: &T, b: &T, f: impl Fn(C, C) -> C) -> T {
    a.zip(b, f)
}

binary_ops!(ScalarField);
binary_ops!(VectorField);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_is_mean() {
        let g = Grid::new(8, 1.3).unwrap();
        let f = ScalarField::from_fn(g, |_| 2.5);
        assert!((f.coefficient([0, 0, 0]) - C::new(2.5, 0.0)).norm() < 1e-14);
        let rest: f64 = f.coefficients().iter().skip(1).map(|z| z.norm()).sum();
        assert!(rest < 1e-13);
    }

    #[test]
    fn sine_coefficients() {
        for &l in &[1.0, 2.0, 0.7] {
            let g = Grid::new(8, l).unwrap();
            let f = ScalarField::from_fn(g, |x| (x[0] / l).sin());
            assert!((f.coefficient([1, 0, 0]) - C::new(0.0, -0.5)).norm() < 1e-14);
            assert!((f.coefficient([-1, 0, 0]) - C::new(0.0, 0.5)).norm() < 1e-14);
            let other: f64 = f.coefficients().iter().map(|z| z.norm()).sum::<f64>() - 1.0;
            assert!(other.abs() < 1e-13);
        }
    }

    #[test]
    fn nyquist_cleared_on_construction() {
        let g = Grid::new(8, 1.0).unwrap();
        let f = ScalarField::from_fn(g, |x| (4.0 * x[1]).cos());
        assert!(f.coefficients().iter().all(|z| z.norm() < 1e-15));
        let raw = vec![C::new(1.0, 0.0); 512];
        let f = ScalarField::from_coefficients(g, raw).unwrap();
        assert_eq!(f.coefficient([4, 0, 0]), C::new(0.0, 0.0));
        assert_eq!(f.coefficient([1, 4, 2]), C::new(0.0, 0.0));
        assert_eq!(f.coefficient([1, -3, 2]), C::new(1.0, 0.0));
    }

    #[test]
    fn shape_mismatch() {
        let g = Grid::new(8, 1.0).unwrap();
        assert_eq!(
            ScalarField::from_physical(g, &[0.0; 10]),
            Err(Error::ShapeMismatch { expected: 512, actual: 10 })
        );
    }

    #[test]
    fn hermitian_detects_complex_data() {
        let g = Grid::new(8, 1.0).unwrap();
        let mut c = vec![C::new(0.0, 0.0); 512];
        c[lattice_index(&g, [1, 0, 0])] = C::new(0.0, 1.0);
        let f = ScalarField::from_coefficients(g, c).unwrap();
        assert!(f.check_hermitian(1e-12).is_err());
        let ok = ScalarField::from_fn(g, |x| x[0].sin() * x[2].cos());
        assert!(ok.check_hermitian(1e-12).is_ok());
    }
}
