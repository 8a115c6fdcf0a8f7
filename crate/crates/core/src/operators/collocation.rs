use num_complex::Complex64;

use super::differential::frequencies;
use crate::spectral::fft;
use crate::spectral::Grid;

type C = Complex64;

/// Physical grid on which pointwise products are formed.
///
/// A field on the base grid is zero-padded onto a grid `factor` times finer,
/// multiplied pointwise there, and the product is truncated back to the
/// 2/3-rule band of the base grid. `factor = 1` is the plain 2/3 rule.
#[derive(Debug, Clone)]
pub struct Collocation {
    base: Grid,
    fine: Grid,
    mask: Vec<bool>,
    fine_xi: Vec<[f64; 3]>,
}

impl Collocation {
    pub fn new(base: Grid, factor: usize) -> Self {
        let fine = base.refined(factor.max(1));
        Self { base, fine, mask: base.dealias_mask(), fine_xi: frequencies(&fine) }
    }

    pub fn base(&self) -> Grid {
        self.base
    }

    pub fn fine(&self) -> Grid {
        self.fine
    }

    pub fn factor(&self) -> usize {
        self.fine.n() / self.base.n()
    }

    pub(crate) fn fine_xi(&self) -> &[[f64; 3]] {
        &self.fine_xi
    }

    /// Base-grid coefficients to samples on the fine grid.
    pub(crate) fn to_fine(&self, comps: &[&[C]]) -> Vec<Vec<f64>> {
        if self.factor() == 1 {
            return fft::to_real_many(self.base.n(), comps);
        }
        let padded: Vec<Vec<C>> = comps.iter().map(|c| fft::pad(c, self.base.n(), self.fine.n())).collect();
        let refs: Vec<&[C]> = padded.iter().map(|c| c.as_slice()).collect();
        fft::to_real_many(self.fine.n(), &refs)
    }

    pub(crate) fn fine_forward(&self, values: &[Vec<f64>]) -> Vec<Vec<C>> {
        fft::to_spectral_many(self.fine.n(), values)
    }

    pub(crate) fn fine_inverse(&self, comps: &[&[C]]) -> Vec<Vec<f64>> {
        fft::to_real_many(self.fine.n(), comps)
    }

    /// Fine-grid samples to base-grid coefficients inside the 2/3-rule band.
    pub(crate) fn to_band(&self, values: &[Vec<f64>]) -> Vec<Vec<C>> {
        let fine = self.fine_forward(values);
        fine.into_iter()
            .map(|c| {
                let mut t = fft::truncate(&c, self.fine.n(), self.base.n());
                for (z, &m) in t.iter_mut().zip(&self.mask) {
                    if !m {
                        *z = C::new(0.0, 0.0);
                    }
                }
                t
            })
            .collect()
    }

    /// Fine-grid coefficients of `i xi_j` applied to one fine-grid array.
    pub(crate) fn fine_derivative(&self, coeffs: &[C], axis: usize) -> Vec<C> {
        super::differential::derivative(coeffs, &self.fine_xi, axis)
    }
}
