use serde::Serialize;

/// Gradient flow `u = grad psi` of the quadratic `psi = x.Hx/2 + b.x`,
/// with `p = -|u|^2/2` and `w = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticFlow {
    pub hessian: [[f64; 3]; 3],
    pub shift: [f64; 3],
}

impl QuadraticFlow {
    /// `psi = x1^2/2 + x2^2/2 - x3^2`.
    pub fn saddle() -> Self {
        Self { hessian: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -2.0]], shift: [0.0; 3] }
    }

    fn mat_vec(m: &[[f64; 3]; 3], v: [f64; 3], transpose: bool) -> [f64; 3] {
        std::array::from_fn(|i| (0..3).map(|j| if transpose { m[j][i] } else { m[i][j] } * v[j]).sum())
    }

    pub fn velocity(&self, x: [f64; 3]) -> [f64; 3] {
        let hx = Self::mat_vec(&self.hessian, x, false);
        std::array::from_fn(|i| hx[i] + self.shift[i])
    }

    pub fn pressure(&self, x: [f64; 3]) -> f64 {
        let u = self.velocity(x);
        -0.5 * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2])
    }

    /// `(u.grad) u = (grad u) u` with `d_j u_i = H_ij`.
    pub fn advection(&self, x: [f64; 3]) -> [f64; 3] {
        Self::mat_vec(&self.hessian, self.velocity(x), false)
    }

    /// `d_j p = -sum_i u_i d_j u_i = -(H^T u)_j`.
    pub fn pressure_gradient(&self, x: [f64; 3]) -> [f64; 3] {
        Self::mat_vec(&self.hessian, self.velocity(x), true).map(|v| -v)
    }

    /// Second derivatives of an affine field vanish.
    pub fn laplacian(&self, _x: [f64; 3]) -> [f64; 3] {
        [0.0; 3]
    }

    pub fn divergence(&self) -> f64 {
        self.hessian[0][0] + self.hessian[1][1] + self.hessian[2][2]
    }
}

/// Largest pointwise residual of the stationary system and of `div u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub max_residual: f64,
    pub max_divergence: f64,
}

impl CounterexampleReport {
    pub fn max(&self) -> f64 {
        self.max_residual.max(self.max_divergence)
    }
}

/// Evaluates `Lap u - (u.grad) u - grad p + curl(w)/2` for the saddle flow at
/// each point; the microrotation equation is trivially satisfied by `w = 0`.
pub fn counterexample_residual(points: &[[f64; 3]]) -> CounterexampleReport {
    flow_residual(&QuadraticFlow::saddle(), points)
}

/// As [`counterexample_residual`] for any quadratic potential.
pub fn flow_residual(flow: &QuadraticFlow, points: &[[f64; 3]]) -> CounterexampleReport {
    let mut max_residual: f64 = 0.0;
    for &x in points {
        let (lap, adv, gp) = (flow.laplacian(x), flow.advection(x), flow.pressure_gradient(x));
        for i in 0..3 {
            max_residual = max_residual.max((lap[i] - adv[i] - gp[i]).abs());
        }
    }
    let max_divergence = if points.is_empty() { 0.0 } else { flow.divergence().abs() };
    CounterexampleReport { max_residual, max_divergence }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::random::GaussianStream;

    /// Central differences of `f` along each axis at `x`.
    fn fd<const M: usize>(f: impl Fn([f64; 3]) -> [f64; M], x: [f64; 3], h: f64) -> [[f64; M]; 3] {
        std::array::from_fn(|j| {
            let mut a = x;
            let mut b = x;
            a[j] += h;
            b[j] -= h;
            let (fa, fb) = (f(a), f(b));
            std::array::from_fn(|i| (fa[i] - fb[i]) / (2.0 * h))
        })
    }

    #[test]
    fn origin_and_unit_point() {
        assert_eq!(counterexample_residual(&[[0.0; 3]]).max(), 0.0);
        let flow = QuadraticFlow::saddle();
        let x = [1.0, 1.0, 1.0];
        assert_eq!(flow.advection(x), [1.0, 1.0, 4.0]);
        assert_eq!(flow.pressure_gradient(x), [-1.0, -1.0, -4.0]);
        assert_eq!(counterexample_residual(&[x]).max(), 0.0);
    }

    #[test]
    fn closed_forms_match_finite_differences() {
        let flow = QuadraticFlow::saddle();
        let x = [0.3, -1.2, 0.7];
        let h = 1e-4;
        let du = fd(|y| flow.velocity(y), x, h);
        let u = flow.velocity(x);
        let adv: Vec<f64> = (0..3).map(|i| (0..3).map(|j| u[j] * du[j][i]).sum()).collect();
        let gp = fd(|y| [flow.pressure(y)], x, h);
        for i in 0..3 {
            assert!((adv[i] - flow.advection(x)[i]).abs() < 1e-8);
            assert!((gp[i][0] - flow.pressure_gradient(x)[i]).abs() < 1e-7);
        }
        let div: f64 = (0..3).map(|j| du[j][j]).sum();
        assert!(div.abs() < 1e-10);
    }

    #[test]
    fn random_points() {
        let mut s = GaussianStream::new(9);
        let pts: Vec<[f64; 3]> = (0..1000).map(|_| std::array::from_fn(|_| 20.0 * s.next_uniform() - 10.0)).collect();
        assert!(counterexample_residual(&pts).max() < 1e-12);
    }

    #[test]
    fn non_harmonic_potential_is_compressible() {
        let flow = QuadraticFlow { hessian: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]], shift: [0.0; 3] };
        assert_eq!(flow_residual(&flow, &[[1.0, 2.0, 3.0]]).max_divergence, 3.0);
    }
}
