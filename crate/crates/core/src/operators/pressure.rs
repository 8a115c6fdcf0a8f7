use num_complex::Complex64;

use super::differential::frequencies;
use crate::spectral::fft;
use crate::spectral::{Field, ScalarField, VectorField};

type C = Complex64;

const PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];

/// `div div (u (x) u)` with the product dealiased by the 2/3 rule.
pub fn pressure_source(u: &VectorField) -> ScalarField {
    let grid = u.grid();
    let u = u.dealiased();
    let phys = fft::to_real_each(grid.n(), &u.components());
    let products: Vec<Vec<f64>> =
        PAIRS.iter().map(|&(i, j)| phys[i].iter().zip(&phys[j]).map(|(a, b)| a * b).collect()).collect();
    let mask = grid.dealias_mask();
    let t: Vec<Vec<C>> = fft::to_spectral_each(grid.n(), &products)
        .into_iter()
        .map(|c| c.into_iter().zip(&mask).map(|(z, &m)| if m { z } else { C::new(0.0, 0.0) }).collect())
        .collect();
    let xi = frequencies(&grid);
    let out: Vec<C> = (0..grid.len())
        .map(|k| {
            let x = xi[k];
            let mut acc = C::new(0.0, 0.0);
            for (p, &(i, j)) in PAIRS.iter().enumerate() {
                let weight = if i == j { 1.0 } else { 2.0 };
                acc -= weight * x[i] * x[j] * t[p][k];
            }
            acc
        })
        .collect();
    ScalarField::from_coefficients(grid, out).expect("grid-sized array")
}

/// `p = (-Delta)^-1 div div (u (x) u)` with zero mean.
pub fn pressure_from_velocity(u: &VectorField) -> ScalarField {
    let source = pressure_source(u);
    let xi2 = u.grid().xi_squared();
    source.map_modes(|k, z| if xi2[k] == 0.0 { C::new(0.0, 0.0) } else { z / xi2[k] })
}
