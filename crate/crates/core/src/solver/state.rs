use crate::error::{Error, Result};
use crate::operators::leray_project;
use crate::spectral::random::gaussian_vector;
use crate::spectral::{sobolev_norm, Grid, VectorField};

/// The unknown pair: solenoidal velocity `u` and microrotation `omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub u: VectorField,
    pub omega: VectorField,
}

/// `||v||_{H^1} + sqrt(eps) ||v||_{H^2}`.
pub fn e_norm(v: &VectorField, epsilon: f64) -> f64 {
    sobolev_norm(v, 1.0).unwrap() + epsilon.sqrt() * sobolev_norm(v, 2.0).unwrap()
}

impl State {
    pub fn new(u: VectorField, omega: VectorField) -> Result<Self> {
        if u.grid() != omega.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { u, omega })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self { u: VectorField::zeros(grid), omega: VectorField::zeros(grid) }
    }

    /// Dealiased random state with `||u||_{H^1} + ||omega||_{H^1} = h1`.
    pub fn random(grid: Grid, seed: u64, h1: f64) -> Self {
        let u = leray_project(&gaussian_vector(grid, seed)).dealiased();
        let omega = gaussian_vector(grid, seed.wrapping_add(0x9e37_79b9_7f4a_7c15)).dealiased();
        let zero_mean = |v: VectorField| v.map_components(|_, k, z| if k == 0 { z * 0.0 } else { z });
        let s = Self { u: zero_mean(u), omega: zero_mean(omega) };
        let norm = s.h1_norm();
        s.scaled(h1 / norm)
    }

    pub fn grid(&self) -> Grid {
        self.u.grid()
    }

    /// `||u||_{H^1} + ||omega||_{H^1}`.
    pub fn h1_norm(&self) -> f64 {
        sobolev_norm(&self.u, 1.0).unwrap() + sobolev_norm(&self.omega, 1.0).unwrap()
    }

    /// `||u||_E + ||omega||_E`.
    pub fn e_norm(&self, epsilon: f64) -> f64 {
        e_norm(&self.u, epsilon) + e_norm(&self.omega, epsilon)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { u: self.u.scaled(s), omega: self.omega.scaled(s) }
    }

    /// `self + a * x`.
    pub fn axpy(&self, a: f64, x: &State) -> Self {
        Self { u: self.u.axpy(a, &x.u), omega: self.omega.axpy(a, &x.omega) }
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.omega.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::divergence;

    #[test]
    fn random_state_is_normalized_and_solenoidal() {
        let g = Grid::new(16, 2.0).unwrap();
        let s = State::random(g, 7, 1e-2);
        assert!((s.h1_norm() - 1e-2).abs() < 1e-15);
        assert!(sobolev_norm(&divergence(&s.u), 0.0).unwrap() < 1e-12 * sobolev_norm(&s.u, 0.0).unwrap());
        assert_eq!(s, State::random(g, 7, 1e-2));
        assert_ne!(s, State::random(g, 8, 1e-2));
    }

    #[test]
    fn e_norm_of_single_mode() {
        let g = Grid::new(16, 1.0).unwrap();
        let v = VectorField::from_fn(g, |x| [0.0, 0.0, (2.0 * x[0]).sin()]);
        let l2 = sobolev_norm(&v, 0.0).unwrap();
        assert!((e_norm(&v, 0.25) - (2.0 * l2 + 0.5 * 4.0 * l2)).abs() < 1e-12 * l2);
    }
}
