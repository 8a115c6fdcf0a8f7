use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic box `[-pi L, pi L)^3` sampled with `n` points per axis.
///
/// Index `i` along an axis carries the integer wavenumber `i` for `i <= n/2`
/// and `i - n` above, and the physical frequency `xi = k / L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n: usize,
    half_period: f64,
}

impl Grid {
    pub fn new(n: usize, half_period: f64) -> Result<Self> {
        if n < 8 || n % 2 != 0 {
            return Err(Error::InvalidGrid(format!("n must be even and >= 8, got {n}")));
        }
        if !(half_period.is_finite() && half_period > 0.0) {
            return Err(Error::InvalidGrid(format!("L must be positive, got {half_period}")));
        }
        Ok(Self { n, half_period })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_period(&self) -> f64 {
        self.half_period
    }

    /// Number of lattice points, `n^3`.
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI * self.half_period / self.n as f64
    }

    /// Lebesgue measure of the box, `(2 pi L)^3`.
    pub fn volume(&self) -> f64 {
        (2.0 * PI * self.half_period).powi(3)
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    /// Largest radius a centred region may reach, `pi L`.
    pub fn box_radius(&self) -> f64 {
        PI * self.half_period
    }

    pub fn wavenumber(&self, i: usize) -> i64 {
        if i <= self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Physical coordinate of sample `i` along one axis.
    pub fn coordinate(&self, i: usize) -> f64 {
        -PI * self.half_period + i as f64 * self.spacing()
    }

    pub fn index(&self, i1: usize, i2: usize, i3: usize) -> usize {
        (i1 * self.n + i2) * self.n + i3
    }

    pub fn unravel(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        [idx / (n * n), (idx / n) % n, idx % n]
    }

    pub fn lattice(&self, idx: usize) -> [i64; 3] {
        self.unravel(idx).map(|i| self.wavenumber(i))
    }

    pub fn xi(&self, idx: usize) -> [f64; 3] {
        self.lattice(idx).map(|k| k as f64 / self.half_period)
    }

    pub fn point(&self, idx: usize) -> [f64; 3] {
        self.unravel(idx).map(|i| self.coordinate(i))
    }

    /// Per-axis frequencies `xi = k / L` in index order.
    pub fn axis_frequencies(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.wavenumber(i) as f64 / self.half_period).collect()
    }

    /// True when any axis index sits on the Nyquist plane `k = n/2`.
    pub fn is_nyquist(&self, idx: usize) -> bool {
        self.unravel(idx).contains(&(self.n / 2))
    }

    /// Index of the wavenumber `-k`.
    pub fn negated(&self, idx: usize) -> usize {
        let [a, b, c] = self.unravel(idx);
        let neg = |i: usize| (self.n - i) % self.n;
        self.index(neg(a), neg(b), neg(c))
    }

    /// Same box with `factor` times as many points per axis.
    pub fn refined(&self, factor: usize) -> Grid {
        Grid { n: self.n * factor, half_period: self.half_period }
    }

    /// Largest retained per-axis wavenumber under the 2/3 rule.
    pub fn dealias_limit(&self) -> i64 {
        (self.n / 3) as i64
    }

    /// `|k_i| <= floor(n/3)` on every axis.
    pub fn dealias_mask(&self) -> Vec<bool> {
        let keep: Vec<bool> =
            (0..self.n).map(|i| self.wavenumber(i).abs() <= self.dealias_limit()).collect();
        let mut mask = vec![false; self.len()];
        for (idx, m) in mask.iter_mut().enumerate() {
            let [a, b, c] = self.unravel(idx);
            *m = keep[a] && keep[b] && keep[c];
        }
        mask
    }

    /// `|xi|^2` for every lattice index.
    pub fn xi_squared(&self) -> Vec<f64> {
        let f = self.axis_frequencies();
        let n = self.n;
        let mut out = Vec::with_capacity(self.len());
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    out.push(f[a] * f[a] + f[b] * f[b] + f[c] * f[c]);
                }
            }
        }
        out
    }

    /// `|x|` for every sample point.
    pub fn radii(&self) -> Vec<f64> {
        let x: Vec<f64> = (0..self.n).map(|i| self.coordinate(i)).collect();
        let n = self.n;
        let mut out = Vec::with_capacity(self.len());
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    out.push((x[a] * x[a] + x[b] * x[b] + x[c] * x[c]).sqrt());
                }
            }
        }
        out
    }
}

/// Shorthand for [`Grid::new`].
pub fn make_grid(n: usize, half_period: f64) -> Result<Grid> {
    Grid::new(n, half_period)
}
