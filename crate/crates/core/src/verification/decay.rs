use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::spectral::{lebesgue_norm_samples, magnitude_samples, Field, Region};

use super::sampling::REFINE;

/// Region family parameterized by the radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Ball,
    Annulus,
}

impl Shape {
    pub fn region(self, radius: f64) -> Region {
        match self {
            Shape::Ball => Region::Ball(radius),
            Shape::Annulus => Region::Annulus(radius),
        }
    }
}

/// One requested norm tabulated over the radii.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayColumn {
    pub p: f64,
    pub shape: Shape,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayTable {
    pub radii: Vec<f64>,
    pub columns: Vec<DecayColumn>,
}

/// `||field||_{L^p(region(R))}` for every radius and requested `(p, shape)`.
///
/// Samples come from a grid refined twice; regions without sample points
/// give 0 with a warning.
pub fn decay_scan(field: &(impl Field + ?Sized), radii: &[f64], norms: &[(f64, Shape)]) -> Result<DecayTable> {
    if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(invalid("R", "must be finite and positive"));
    }
    let samples = magnitude_samples(field, REFINE);
    let columns = norms
        .iter()
        .map(|&(p, shape)| {
            let values = radii.iter().map(|&r| lebesgue_norm_samples(&samples, p, shape.region(r))).collect::<Result<_>>()?;
            Ok(DecayColumn { p, shape, values })
        })
        .collect::<Result<_>>()?;
    Ok(DecayTable { radii: radii.to_vec(), columns })
}
