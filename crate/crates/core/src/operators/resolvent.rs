use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::spectral::{ScalarField, VectorField};

/// Parameters of the symbol `|xi|^{2 sigma} / (eps |xi|^4 + |xi|^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolventSpec {
    pub epsilon: f64,
    pub sigma: f64,
}

impl ResolventSpec {
    pub fn new(epsilon: f64, sigma: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        if !(1.0..=2.0).contains(&sigma) {
            return Err(invalid("sigma", "must be in [1,2]"));
        }
        Ok(Self { epsilon, sigma })
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(invalid("epsilon", "must be in (0,1]"));
    }
    Ok(())
}

/// `1 / (eps |xi|^4 + |xi|^2)`, and 0 at the zero mode.
pub fn resolvent_symbol(epsilon: f64, xi_sq: f64) -> f64 {
    if xi_sq == 0.0 {
        0.0
    } else {
        1.0 / (epsilon * xi_sq * xi_sq + xi_sq)
    }
}

/// Inverts `eps Delta^2 - Delta` mode by mode; the zero mode is set to 0.
pub fn resolvent(v: &VectorField, epsilon: f64) -> Result<VectorField> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(invalid("epsilon", "must be positive"));
    }
    let xi2 = v.grid().xi_squared();
    Ok(v.map_components(|_, k, z| z * resolvent_symbol(epsilon, xi2[k])))
}

pub fn resolvent_scalar(f: &ScalarField, epsilon: f64) -> Result<ScalarField> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(invalid("epsilon", "must be positive"));
    }
    let xi2 = f.grid().xi_squared();
    Ok(f.map_modes(|k, z| z * resolvent_symbol(epsilon, xi2[k])))
}

fn weighted_symbol(spec: &ResolventSpec, x: f64) -> f64 {
    x.powf(2.0 * spec.sigma - 2.0) / (spec.epsilon * x * x + 1.0)
}

/// Supremum of `|xi|^{2 sigma} / (eps |xi|^4 + |xi|^2)` over `0 < |xi| <= xi_max`.
///
/// Scans a logarithmic sample from `1e-9 xi_max` and polishes the best
/// bracket by golden-section search.
pub fn multiplier_sup(spec: &ResolventSpec, xi_max: f64) -> Result<f64> {
    if !(xi_max > 0.0 && xi_max.is_finite()) {
        return Err(invalid("xi_max", "must be positive"));
    }
    const SAMPLES: usize = 200_000;
    let lo = (xi_max * 1e-9).ln();
    let hi = xi_max.ln();
    let at = |i: usize| (lo + (hi - lo) * i as f64 / SAMPLES as f64).exp();
    let (mut best_i, mut best) = (0, weighted_symbol(spec, at(0)));
    for i in 1..=SAMPLES {
        let v = weighted_symbol(spec, at(i));
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let (mut a, mut b) = (at(best_i.saturating_sub(1)), at((best_i + 1).min(SAMPLES)));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if weighted_symbol(spec, c) >= weighted_symbol(spec, d) {
            b = d;
        } else {
            a = c;
        }
    }
    Ok(best.max(weighted_symbol(spec, 0.5 * (a + b))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{sobolev_norm, Grid};

    #[test]
    fn unit_mode_halved() {
        let g = Grid::new(8, 1.0).unwrap();
        let v = VectorField::from_fn(g, |x| [0.0, x[0].sin(), 0.0]);
        let r = resolvent(&v, 1.0).unwrap();
        let d = &r - &v.scaled(0.5);
        assert!(sobolev_norm(&d, 0.0).unwrap() < 1e-14);
    }

    #[test]
    fn constant_maps_to_zero() {
        let g = Grid::new(8, 1.0).unwrap();
        let v = VectorField::from_fn(g, |_| [1.0, 2.0, 3.0]);
        assert_eq!(sobolev_norm(&resolvent(&v, 0.3).unwrap(), 0.0).unwrap(), 0.0);
        assert!(resolvent(&v, 0.0).is_err());
    }

    #[test]
    fn small_epsilon_is_inverse_laplacian() {
        assert!((resolvent_symbol(1e-12, 4.0) - 0.25).abs() < 1e-10);
    }

    #[test]
    fn spec_ranges() {
        assert!(ResolventSpec::new(0.0, 1.0).is_err());
        assert!(ResolventSpec::new(1.5, 1.0).is_err());
        assert!(ResolventSpec::new(0.5, 2.5).is_err());
        assert!(ResolventSpec::new(1.0, 2.0).is_ok());
    }
}
