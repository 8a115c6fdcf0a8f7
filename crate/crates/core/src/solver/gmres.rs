/// Outcome of a restarted GMRES run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct GmresOutcome {
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

fn dot(w: &[f64], a: &[f64], b: &[f64]) -> f64 {
    w.iter().zip(a).zip(b).map(|((w, a), b)| w * a * b).sum()
}

fn residual(apply: &impl Fn(&[f64]) -> Vec<f64>, b: &[f64], x: &[f64]) -> Vec<f64> {
    let ax = apply(x);
    b.iter().zip(&ax).map(|(b, a)| b - a).collect()
}

/// Restarted GMRES for `apply(x) = b` in the inner product `sum w_i a_i b_i`.
///
/// Stops once the residual norm is at most `tol` (absolute) or after
/// `max_iters` Arnoldi steps; `x` holds the initial guess on entry.
pub(crate) fn gmres(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    b: &[f64],
    x: &mut [f64],
    w: &[f64],
    tol: f64,
    restart: usize,
    max_iters: usize,
) -> GmresOutcome {
    let mut total = 0;
    let mut r = residual(&apply, b, x);
    let mut beta = dot(w, &r, &r).sqrt();
    while beta > tol && total < max_iters {
        let m = restart.min(max_iters - total);
        let mut basis: Vec<Vec<f64>> = vec![r.iter().map(|v| v / beta).collect()];
        let mut h = vec![vec![0.0; m]; m + 1];
        let mut cs = vec![0.0; m];
        let mut sn = vec![0.0; m];
        let mut gvec = vec![0.0; m + 1];
        gvec[0] = beta;
        let mut k = 0;
        while k < m {
            let mut v = apply(&basis[k]);
            for (i, q) in basis.iter().enumerate() {
                let c = dot(w, &v, q);
                h[i][k] = c;
                v.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
            }
            let norm = dot(w, &v, &v).sqrt();
            h[k + 1][k] = norm;
            for i in 0..k {
                let t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let d = h[k][k].hypot(h[k + 1][k]);
            if d == 0.0 {
                break;
            }
            cs[k] = h[k][k] / d;
            sn[k] = h[k + 1][k] / d;
            h[k][k] = d;
            h[k + 1][k] = 0.0;
            gvec[k + 1] = -sn[k] * gvec[k];
            gvec[k] *= cs[k];
            k += 1;
            total += 1;
            if gvec[k].abs() <= tol || norm == 0.0 {
                break;
            }
            basis.push(v.iter().map(|a| a / norm).collect());
        }
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let s: f64 = (i + 1..k).map(|j| h[i][j] * y[j]).sum();
            y[i] = (gvec[i] - s) / h[i][i];
        }
        for (yi, q) in y.iter().zip(&basis) {
            x.iter_mut().zip(q).for_each(|(a, b)| *a += yi * b);
        }
        r = residual(&apply, b, x);
        let new_beta = dot(w, &r, &r).sqrt();
        if k == 0 || new_beta >= beta {
            beta = new_beta;
            break;
        }
        beta = new_beta;
    }
    GmresOutcome { iterations: total, residual: beta, converged: beta <= tol }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_nonsymmetric_system() {
        let n = 40;
        let a = |i: usize, j: usize| -> f64 {
            if i == j {
                4.0 + i as f64 * 0.1
            } else if j == i + 1 {
                1.0
            } else if i == j + 1 {
                -0.5
            } else {
                0.0
            }
        };
        let apply = |x: &[f64]| (0..n).map(|i| (0..n).map(|j| a(i, j) * x[j]).sum()).collect::<Vec<f64>>();
        let exact: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let b = apply(&exact);
        let w: Vec<f64> = (0..n).map(|i| 1.0 + i as f64).collect();
        let mut x = vec![0.0; n];
        let out = gmres(apply, &b, &mut x, &w, 1e-12, 10, 500);
        assert!(out.converged);
        let err: f64 = x.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10);
    }

    #[test]
    fn exact_guess_takes_no_steps() {
        let apply = |x: &[f64]| x.iter().map(|v| 2.0 * v).collect::<Vec<f64>>();
        let mut x = vec![1.0, 2.0];
        let out = gmres(apply, &[2.0, 4.0], &mut x, &[1.0, 1.0], 1e-14, 5, 10);
        assert_eq!(out.iterations, 0);
        assert!(out.converged);
    }
}
