use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::operators::{divergence, laplacian_scalar};
use crate::spectral::{magnitude_samples, sobolev_norm, Field, ScalarField, VectorField};

use super::residuals::transport;
use super::sampling::{Fine, REFINE};

/// One inequality `left <= C right`, reported with unit constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rung {
    pub name: String,
    pub left: f64,
    pub right: f64,
    /// `left / right`, the smallest admissible constant.
    pub ratio: f64,
}

/// `||w||_{H^{1/2}}^2 <= ||w||_{L^2} ||w||_{H^1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interpolation {
    pub left: f64,
    pub right: f64,
    /// `right - left`, nonnegative up to round-off.
    pub slack: f64,
}

/// `2 Lap(div w) - kappa div w - div((u.grad) w)` and its pieces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivIdentity {
    pub residual: f64,
    /// Residual over the largest piece.
    pub relative: f64,
    pub laplacian: f64,
    pub damping: f64,
    pub advection: f64,
    /// `||Lap^2 div w||`; times `epsilon` it is the hyperviscous contribution.
    pub bilaplacian: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderReport {
    pub rungs: Vec<Rung>,
    pub interpolation: Interpolation,
    pub div_identity: DivIdentity,
}

impl LadderReport {
    pub fn rung(&self, name: &str) -> Option<&Rung> {
        self.rungs.iter().find(|r| r.name == name)
    }
}

fn rung(name: &str, left: f64, right: f64) -> Rung {
    let ratio = if right == 0.0 { if left == 0.0 { 0.0 } else { f64::INFINITY } } else { left / right };
    Rung { name: name.to_string(), left, right, ratio }
}

fn h(v: &(impl Field + ?Sized), s: f64) -> f64 {
    sobolev_norm(v, s).unwrap()
}

/// `||u (x) u||_{H^s}` with the products formed on a refined grid.
fn tensor_norm(u: &VectorField, s: f64) -> f64 {
    let fine = Fine::new(u.grid(), REFINE);
    let phys = fine.samples(&u.components());
    let mut total = 0.0;
    for i in 0..3 {
        for j in i..3 {
            let prod: Vec<f64> = phys[i].iter().zip(&phys[j]).map(|(a, b)| a * b).collect();
            let f = ScalarField::from_physical(fine.grid(), &prod).unwrap();
            total += if i == j { 1.0 } else { 2.0 } * h(&f, s).powi(2);
        }
    }
    total.sqrt()
}

/// `||w||_{H^{1/2}}^2` against `||w||_{L^2} ||w||_{H^1}`.
pub fn interpolation(omega: &VectorField) -> Interpolation {
    let left = h(omega, 0.5).powi(2);
    let right = h(omega, 0.0) * h(omega, 1.0);
    Interpolation { left, right, slack: right - left }
}

/// Both sides of each regularity estimate with unit constants.
///
/// Rungs: `u_h32` (`||u||_{H^{3/2}}` vs `||u(x)u||_{H^{1/2}} + ||w||_{H^{1/2}}`),
/// `u_h32_product` (vs `||u||_{H^1}^2 + ||w||_{L^2}^{1/2}||w||_{H^1}^{1/2}`),
/// `u_h2` (`||u||_{H^2}` vs `||u(x)u||_{H^1} + ||w||_{H^1}`),
/// `u_h2_product` (vs `||u||_{H^1}||u||_{H^{3/2}} + ||w||_{H^1}`),
/// `div_w_h1` (`||div w||_{H^1}` vs `kappa||w||_{L^2} + ||u||_inf||w||_{H^1}`) and
/// `w_h2` (`||w||_{H^2}` vs `||div w||_{H^1} + kappa||w||_{L^2} + ||u||_inf||w||_{H^1} + ||u||_{H^1}`).
pub fn regularity_ladder(u: &VectorField, omega: &VectorField, kappa: f64) -> Result<LadderReport> {
    if omega.grid() != u.grid() {
        return Err(Error::GridMismatch);
    }
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(invalid("kappa", "must be finite and >= 0"));
    }
    let u_inf = magnitude_samples(u, REFINE).values.into_iter().fold(0.0, f64::max);
    let div_w = divergence(omega);
    let interp = interpolation(omega);
    let w_half = interp.left.sqrt();
    let rungs = vec![
        rung("u_h32", h(u, 1.5), tensor_norm(u, 0.5) + w_half),
        rung("u_h32_product", h(u, 1.5), h(u, 1.0).powi(2) + interp.right.sqrt()),
        rung("u_h2", h(u, 2.0), tensor_norm(u, 1.0) + h(omega, 1.0)),
        rung("u_h2_product", h(u, 2.0), h(u, 1.0) * h(u, 1.5) + h(omega, 1.0)),
        rung("div_w_h1", h(&div_w, 1.0), kappa * h(omega, 0.0) + u_inf * h(omega, 1.0)),
        rung("w_h2", h(omega, 2.0), h(&div_w, 1.0) + kappa * h(omega, 0.0) + u_inf * h(omega, 1.0) + h(u, 1.0)),
    ];

    let lap = &laplacian_scalar(&div_w) * 2.0;
    let damp = &div_w * kappa;
    let adv = divergence(&transport(u, omega));
    let res = &(&lap - &damp) - &adv;
    let pieces = [h(&lap, 0.0), h(&damp, 0.0), h(&adv, 0.0)];
    let scale = pieces.iter().copied().fold(0.0, f64::max);
    let residual = h(&res, 0.0);
    let div_identity = DivIdentity {
        residual,
        relative: if scale == 0.0 { 0.0 } else { residual / scale },
        laplacian: pieces[0],
        damping: pieces[1],
        advection: pieces[2],
        bilaplacian: h(&laplacian_scalar(&laplacian_scalar(&div_w)), 0.0),
    };
    let report = LadderReport { rungs, interpolation: interp, div_identity };
    if report.rungs.iter().any(|r| !r.left.is_finite() || !r.right.is_finite()) || !residual.is_finite() {
        return Err(Error::NonFinite("regularity ladder"));
    }
    Ok(report)
}
