//! Reproducible Gaussian noise.
//!
//! The stream is the 64-bit linear congruential generator
//! `s <- 6364136223846793005 * s + 1442695040888963407 (mod 2^64)`,
//! seeded with `s = seed`. Each draw advances the state once and maps the
//! top 53 bits to `u = ((s >> 11) + 0.5) / 2^53` in `(0, 1)`. Pairs
//! `(u1, u2)` become unit-variance normals by Box-Muller:
//! `sqrt(-2 ln u1) cos(2 pi u2)` and `sqrt(-2 ln u1) sin(2 pi u2)`.

use std::f64::consts::PI;

use super::field::{ScalarField, VectorField};
use super::grid::Grid;

const MULTIPLIER: u64 = 6364136223846793005;
const INCREMENT: u64 = 1442695040888963407;

#[derive(Debug, Clone)]
pub struct GaussianStream {
    state: u64,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self { state: seed, spare: None }
    }

    pub fn next_uniform(&mut self) -> f64 {
        self.state = self.state.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT);
        ((self.state >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }

    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.next_uniform();
        let u2 = self.next_uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    pub fn samples(&mut self, len: usize) -> Vec<f64> {
        (0..len).map(|_| self.next_gaussian()).collect()
    }
}

/// White noise sampled on the grid, restricted to the 2/3-rule band.
pub fn gaussian_scalar(grid: Grid, seed: u64) -> ScalarField {
    let mut rng = GaussianStream::new(seed);
    let values = rng.samples(grid.len());
    ScalarField::from_physical(grid, &values).expect("sample count matches grid").dealiased()
}

/// Three independent white-noise components, restricted to the 2/3-rule band.
pub fn gaussian_vector(grid: Grid, seed: u64) -> VectorField {
    let mut rng = GaussianStream::new(seed);
    let a = rng.samples(grid.len());
    let b = rng.samples(grid.len());
    let c = rng.samples(grid.len());
    VectorField::from_physical(grid, [&a, &b, &c]).expect("sample count matches grid").dealiased()
}
