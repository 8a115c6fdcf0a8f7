use crate::error::{invalid, Error, Result};
use crate::operators::{cutoff_gradient_norm, cutoff_laplacian_norm, CutoffSpec};
use crate::spectral::{lebesgue_of_samples, Grid, Region, Samples, ScalarField, VectorField};

use super::report::{term, LedgerReport};
use super::sampling::{Fine, REFINE};

/// Admissible integrability window for `u`.
pub const Q_WINDOW: (f64, f64) = (3.0, 4.5);

/// Names of the right-side terms, in ledger order.
pub const LIOUVILLE_TERMS: [&str; 6] =
    ["t1_cutoff_laplacian", "t2_div_omega", "t3_advection_u", "t4_advection_omega", "t5_pressure", "t6_curl_cross"];

/// `ell` with `1/ell + 3/q = 1`; infinite at `q = 3`.
pub fn holder_ell(q: f64) -> f64 {
    if q == 3.0 {
        f64::INFINITY
    } else {
        q / (q - 3.0)
    }
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Pointwise densities on the refined grid, shared by every radius.
struct Densities {
    grid: Grid,
    cell: f64,
    u: Vec<Vec<f64>>,
    w: Vec<Vec<f64>>,
    div_w: Vec<f64>,
    /// `|grad u|^2 + |grad w|^2 + (div w)^2`.
    gradients: Vec<f64>,
    /// `((u.grad) u).u`
    adv_u: Vec<f64>,
    /// `((u.grad) w).w`
    adv_w: Vec<f64>,
    /// `grad p . u`
    grad_p_u: Vec<f64>,
    /// `curl u . w`
    curl_u_w: Vec<f64>,
    /// `curl w . u`
    curl_w_u: Vec<f64>,
    abs_u: Samples,
    abs_w: Samples,
    abs_p: Samples,
    abs_div_w: Samples,
}

fn magnitude(parts: &[Vec<f64>]) -> Vec<f64> {
    (0..parts[0].len()).map(|p| parts.iter().map(|c| c[p] * c[p]).sum::<f64>().sqrt()).collect()
}

impl Densities {
    fn new(u: &VectorField, w: &VectorField, p: &ScalarField) -> Self {
        let fine = Fine::new(u.grid(), REFINE);
        let grid = fine.grid();
        let m = grid.len();
        let mut base = fine.samples(&[u.coefficients(0), u.coefficients(1), u.coefficients(2), w.coefficients(0), w.coefficients(1), w.coefficients(2), p.coefficients()]);
        let p_phys = base.pop().unwrap();
        let w_phys = base.split_off(3);
        let u_phys = base;

        let mut gradients = vec![0.0; m];
        let mut adv_u = vec![0.0; m];
        let mut adv_w = vec![0.0; m];
        let mut curl_u_w = vec![0.0; m];
        let mut curl_w_u = vec![0.0; m];
        let mut div_w = vec![0.0; m];
        for k in 0..3 {
            for j in 0..3 {
                let du = fine.derivative(u.coefficients(k), j);
                let dw = fine.derivative(w.coefficients(k), j);
                for x in 0..m {
                    gradients[x] += du[x] * du[x] + dw[x] * dw[x];
                    adv_u[x] += u_phys[j][x] * du[x] * u_phys[k][x];
                    adv_w[x] += u_phys[j][x] * dw[x] * w_phys[k][x];
                }
                for i in 0..3 {
                    let e = levi_civita(i, j, k);
                    if e != 0.0 {
                        for x in 0..m {
                            curl_u_w[x] += e * du[x] * w_phys[i][x];
                            curl_w_u[x] += e * dw[x] * u_phys[i][x];
                        }
                    }
                }
                if j == k {
                    for x in 0..m {
                        div_w[x] += dw[x];
                    }
                }
            }
        }
        let mut grad_p_u = vec![0.0; m];
        for j in 0..3 {
            let dp = fine.derivative(p.coefficients(), j);
            for x in 0..m {
                grad_p_u[x] += dp[x] * u_phys[j][x];
            }
        }
        for x in 0..m {
            gradients[x] += div_w[x] * div_w[x];
        }
        let samples = |values| Samples { grid, values };
        Self {
            grid,
            cell: fine.cell(),
            abs_u: samples(magnitude(&u_phys)),
            abs_w: samples(magnitude(&w_phys)),
            abs_p: samples(p_phys.iter().map(|v| v.abs()).collect()),
            abs_div_w: samples(div_w.iter().map(|v| v.abs()).collect()),
            u: u_phys,
            w: w_phys,
            div_w,
            gradients,
            adv_u,
            adv_w,
            grad_p_u,
            curl_u_w,
            curl_w_u,
        }
    }

    fn annulus(&self, samples: &Samples, p: f64, radius: f64) -> Result<f64> {
        lebesgue_of_samples(samples, p, Region::Annulus(radius))?
            .ok_or(Error::EmptyRegion { inner: radius, outer: 2.0 * radius })
    }

    fn ledger(&self, radius: f64, q: f64, kappa: f64) -> Result<LedgerReport> {
        let phi = CutoffSpec::phi(radius)?;
        phi.check_in_box(&self.grid)?;
        let (mut left, mut t) = (0.0, [0.0f64; 6]);
        let mut phi_w_sq = 0.0;
        for x in 0..self.grid.len() {
            let pt = self.grid.point(x);
            let f = phi.value_at(pt);
            let g = phi.gradient_at(pt);
            let f2 = f * f;
            let grad_f2 = g.map(|c| 2.0 * f * c);
            let lap_f2 = 2.0 * (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]) + 2.0 * f * phi.laplacian_at(pt);
            let (u, w) = ([self.u[0][x], self.u[1][x], self.u[2][x]], [self.w[0][x], self.w[1][x], self.w[2][x]]);
            let u2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
            let w2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
            left += f2 * (self.gradients[x] + kappa * w2 - self.curl_u_w[x]);
            phi_w_sq += f2 * w2;
            t[0] += 0.5 * lap_f2 * (u2 + w2);
            t[1] -= (grad_f2[0] * w[0] + grad_f2[1] * w[1] + grad_f2[2] * w[2]) * self.div_w[x];
            t[2] -= f2 * self.adv_u[x];
            t[3] -= f2 * self.adv_w[x];
            t[4] -= f2 * self.grad_p_u[x];
            t[5] += 0.5 * f2 * (self.curl_w_u[x] - self.curl_u_w[x]);
        }
        let h = self.cell;
        left *= h;
        phi_w_sq *= h;
        let t = t.map(|v| v * h);

        let ell = holder_ell(q);
        let g3 = cutoff_gradient_norm(radius, 3.0);
        let g6 = cutoff_gradient_norm(radius, 6.0);
        let gl = cutoff_gradient_norm(radius, ell);
        let lap = cutoff_laplacian_norm(radius, 1.5);
        let u6 = self.annulus(&self.abs_u, 6.0, radius)?;
        let w6 = self.annulus(&self.abs_w, 6.0, radius)?;
        let uq = self.annulus(&self.abs_u, q, radius)?;
        let pq = self.annulus(&self.abs_p, q / 2.0, radius)?;
        let dw2 = self.annulus(&self.abs_div_w, 2.0, radius)?;
        let majorants = [
            (g3 * g3 + lap) * (u6 * u6 + w6 * w6),
            2.0 * dw2 * w6 * g3,
            gl * uq.powi(3),
            0.75 * phi_w_sq + (u6 * g6 * w6).powi(2) / 3.0,
            2.0 * gl * pq * uq,
            0.25 * phi_w_sq + (g3 * u6).powi(2),
        ];
        let terms = (0..6).map(|i| term(LIOUVILLE_TERMS[i], t[i], Some(majorants[i]))).collect();
        let report = LedgerReport::new(Some(radius), left, terms);
        if !report.is_finite() {
            return Err(Error::NonFinite("Liouville ledger"));
        }
        Ok(report)
    }
}

/// Localized energy balance with the cutoff `phi_R`, one report per radius.
///
/// Left: `int phi^2 (|grad u|^2 + |grad w|^2 + (div w)^2 - curl u . w) + kappa int phi^2 |w|^2`.
/// Right: the six cutoff terms in their defining form, the last being
/// `(1/2) int phi^2 (curl w . u - curl u . w) = (1/2) int w . (grad(phi^2) ^ u)`.
/// Each term carries its Hölder majorant over the annulus `R <= |x| <= 2R`.
/// Integrands are sampled on a grid refined twice.
pub fn liouville_ledger(
    u: &VectorField,
    omega: &VectorField,
    p: &ScalarField,
    radii: &[f64],
    q: f64,
    kappa: f64,
) -> Result<Vec<LedgerReport>> {
    let grid = u.grid();
    if omega.grid() != grid || p.grid() != grid {
        return Err(Error::GridMismatch);
    }
    if !(q >= Q_WINDOW.0 && q <= Q_WINDOW.1) {
        return Err(invalid("q", format!("must lie in [{}, {}]", Q_WINDOW.0, Q_WINDOW.1)));
    }
    if !(kappa >= 1.0 && kappa.is_finite()) {
        return Err(invalid("kappa", "must be finite and >= 1"));
    }
    for &r in radii {
        CutoffSpec::phi(r)?.check_in_box(&grid)?;
    }
    let d = Densities::new(u, omega, p);
    radii.iter().map(|&r| d.ledger(r, q, kappa)).collect()
}
