use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::spectral::{Grid, Samples};

/// Which cutoff the profile stands for; both share the same radial shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CutoffFamily {
    /// Localizes the nonlinear and coupling terms of the regularized system.
    Theta,
    /// Test function of the Liouville ledger.
    Phi,
}

/// Radial cutoff `S(|x| / R)`: 1 on `|x| <= R`, 0 on `|x| >= 2R`.
///
/// The transition is the quintic smoothstep `1 - (6t^5 - 15t^4 + 10t^3)`
/// in `t = |x|/R - 1`, which is C^2 at both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec {
    pub radius: f64,
    pub family: CutoffFamily,
}

/// Profile `S(t)`.
pub fn profile(t: f64) -> f64 {
    if t <= 1.0 {
        1.0
    } else if t >= 2.0 {
        0.0
    } else {
        let s = t - 1.0;
        1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s))
    }
}

/// `S'(t) = -30 s^2 (1 - s)^2`, `s = t - 1`.
pub fn profile_derivative(t: f64) -> f64 {
    if t <= 1.0 || t >= 2.0 {
        0.0
    } else {
        let s = t - 1.0;
        -30.0 * s * s * (1.0 - s) * (1.0 - s)
    }
}

/// `S''(t) = -60 s (1 - s)(1 - 2s)`.
pub fn profile_second_derivative(t: f64) -> f64 {
    if t <= 1.0 || t >= 2.0 {
        0.0
    } else {
        let s = t - 1.0;
        -60.0 * s * (1.0 - s) * (1.0 - 2.0 * s)
    }
}

/// `max |S'| = 30/16`, attained at `t = 3/2`.
pub const PROFILE_SLOPE_MAX: f64 = 1.875;

impl CutoffSpec {
    pub fn new(radius: f64, family: CutoffFamily) -> Result<Self> {
        if !(radius.is_finite() && radius >= 1.0) {
            return Err(invalid("R", "must be >= 1"));
        }
        Ok(Self { radius, family })
    }

    pub fn theta(radius: f64) -> Result<Self> {
        Self::new(radius, CutoffFamily::Theta)
    }

    pub fn phi(radius: f64) -> Result<Self> {
        Self::new(radius, CutoffFamily::Phi)
    }

    pub fn value(&self, r: f64) -> f64 {
        profile(r / self.radius)
    }

    pub fn radial_derivative(&self, r: f64) -> f64 {
        profile_derivative(r / self.radius) / self.radius
    }

    pub fn radial_second_derivative(&self, r: f64) -> f64 {
        profile_second_derivative(r / self.radius) / (self.radius * self.radius)
    }

    pub fn value_at(&self, x: [f64; 3]) -> f64 {
        self.value(norm(x))
    }

    pub fn gradient_at(&self, x: [f64; 3]) -> [f64; 3] {
        let r = norm(x);
        if r == 0.0 {
            return [0.0; 3];
        }
        let d = self.radial_derivative(r) / r;
        x.map(|c| c * d)
    }

    /// `S'' + 2 S' / r` in physical units.
    pub fn laplacian_at(&self, x: [f64; 3]) -> f64 {
        let r = norm(x);
        if r == 0.0 {
            return 0.0;
        }
        self.radial_second_derivative(r) + 2.0 * self.radial_derivative(r) / r
    }

    /// Requires the support `|x| <= 2R` to fit inside the box.
    pub fn check_in_box(&self, grid: &Grid) -> Result<()> {
        let limit = grid.box_radius();
        if 2.0 * self.radius > limit * (1.0 + 1e-12) {
            return Err(Error::OutsideBox { radius: 2.0 * self.radius, limit });
        }
        Ok(())
    }

    pub(crate) fn sample(&self, grid: &Grid) -> Vec<f64> {
        grid.radii().into_iter().map(|r| self.value(r)).collect()
    }
}

fn norm(x: [f64; 3]) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

/// Samples the cutoff at the grid points.
pub fn cutoff_field(spec: &CutoffSpec, grid: &Grid) -> Result<Samples> {
    spec.check_in_box(grid)?;
    Ok(Samples { grid: *grid, values: spec.sample(grid) })
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let m = intervals + intervals % 2;
    let h = (b - a) / m as f64;
    let mut acc = f(a) + f(b);
    for i in 1..m {
        acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// `||grad S(|x|/R)||_{L^ell(R^3)}` by radial quadrature; `ell = inf` gives `max|S'|/R`.
pub fn cutoff_gradient_norm(radius: f64, ell: f64) -> f64 {
    if ell.is_infinite() {
        return PROFILE_SLOPE_MAX / radius;
    }
    let integral = simpson(|t| t * t * profile_derivative(t).abs().powf(ell), 1.0, 2.0, 20_000);
    (4.0 * PI * radius.powf(3.0 - ell) * integral).powf(1.0 / ell)
}

/// `||Delta S(|x|/R)||_{L^p(R^3)}` by radial quadrature.
pub fn cutoff_laplacian_norm(radius: f64, p: f64) -> f64 {
    let lap = |t: f64| profile_second_derivative(t) + 2.0 * profile_derivative(t) / t;
    if p.is_infinite() {
        let m = (0..=20_000).map(|i| lap(1.0 + i as f64 / 20_000.0).abs()).fold(0.0, f64::max);
        return m / (radius * radius);
    }
    let integral = simpson(|t| t * t * lap(t).abs().powf(p), 1.0, 2.0, 20_000);
    (4.0 * PI * radius.powf(3.0 - 2.0 * p) * integral).powf(1.0 / p)
}
