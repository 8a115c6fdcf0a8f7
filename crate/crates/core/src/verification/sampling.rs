use num_complex::Complex64;

use crate::operators::{derivative, frequencies};
use crate::spectral::fft;
use crate::spectral::Grid;

type C = Complex64;

/// Refinement used for cubic and higher integrands.
pub(crate) const REFINE: usize = 2;

/// Spectral interpolation of base-grid coefficients onto a refined grid.
pub(crate) struct Fine {
    base: Grid,
    fine: Grid,
    xi: Vec<[f64; 3]>,
}

impl Fine {
    pub(crate) fn new(base: Grid, factor: usize) -> Self {
        Self { base, fine: base.refined(factor.max(1)), xi: frequencies(&base) }
    }

    pub(crate) fn grid(&self) -> Grid {
        self.fine
    }

    pub(crate) fn cell(&self) -> f64 {
        self.fine.cell_volume()
    }

    pub(crate) fn samples(&self, comps: &[&[C]]) -> Vec<Vec<f64>> {
        let padded: Vec<Vec<C>> = comps.iter().map(|c| fft::pad(c, self.base.n(), self.fine.n())).collect();
        let refs: Vec<&[C]> = padded.iter().map(|c| c.as_slice()).collect();
        fft::to_real_each(self.fine.n(), &refs)
    }

    pub(crate) fn sample(&self, comp: &[C]) -> Vec<f64> {
        self.samples(&[comp]).pop().unwrap()
    }

    /// Samples of `d/dx_axis` of one component.
    pub(crate) fn derivative(&self, comp: &[C], axis: usize) -> Vec<f64> {
        self.sample(&derivative(comp, &self.xi, axis))
    }
}
