use num_complex::Complex64;

use super::params::SolverParams;
use super::state::State;
use crate::error::{Error, Result};
use crate::operators::{curl, divergence, frequencies, leray_project, resolvent_symbol, skew_advection, Collocation};
use crate::spectral::{Field, Grid, VectorField};

type C = Complex64;

/// Right-hand-side pieces of the mollified system at one state, each in the
/// 2/3-rule band.
#[derive(Debug, Clone)]
pub struct Terms {
    /// `((theta u).grad)(theta u)`.
    pub advection_u: VectorField,
    /// `((theta u).grad)(theta omega)`.
    pub advection_w: VectorField,
    /// `theta^2 curl omega`.
    pub coupling_u: VectorField,
    /// `theta^2 curl u`.
    pub coupling_w: VectorField,
    /// `grad(theta div omega)`.
    pub grad_div: VectorField,
    /// `theta^2 omega`.
    pub damping: VectorField,
}

/// The mollified operator on a fixed grid with its cutoff samples cached.
#[derive(Debug, Clone)]
pub struct System {
    grid: Grid,
    epsilon: f64,
    kappa: f64,
    col: Collocation,
    theta: Vec<f64>,
    theta2: Vec<f64>,
    xi: Vec<[f64; 3]>,
    symbol: Vec<f64>,
    f: VectorField,
    g: VectorField,
    band: Vec<usize>,
    weights: Vec<f64>,
}

impl System {
    pub fn new(params: &SolverParams) -> Result<Self> {
        params.validate()?;
        let grid = params.grid();
        let col = Collocation::new(grid, params.padding);
        let theta = params.cutoff()?.sample(&col.fine());
        let theta2 = theta.iter().map(|t| t * t).collect();
        let xi2 = grid.xi_squared();
        let symbol: Vec<f64> = xi2.iter().map(|&x| resolvent_symbol(params.epsilon, x)).collect();
        let mask = grid.dealias_mask();
        let band: Vec<usize> = (1..grid.len()).filter(|&k| mask[k]).collect();
        let vol = grid.volume();
        let weights = band.iter().map(|&k| vol * (xi2[k] + params.epsilon * xi2[k] * xi2[k])).collect();
        Ok(Self {
            grid,
            epsilon: params.epsilon,
            kappa: params.kappa,
            col,
            theta,
            theta2,
            xi: frequencies(&grid),
            symbol,
            f: leray_project(&params.f.dealiased()),
            g: params.g.dealiased(),
            band,
            weights,
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn collocation(&self) -> &Collocation {
        &self.col
    }

    /// Cutoff samples on the collocation grid.
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Band-limited forcing seen by the solver (`f` projected).
    pub fn forcing(&self) -> (&VectorField, &VectorField) {
        (&self.f, &self.g)
    }

    fn band_field(&self, mut parts: impl Iterator<Item = Vec<C>>) -> VectorField {
        VectorField::from_raw(self.grid, [parts.next().unwrap(), parts.next().unwrap(), parts.next().unwrap()])
    }

    fn product(&self, weight: &[f64], fields: &[Vec<f64>]) -> Vec<Vec<f64>> {
        fields.iter().map(|v| v.iter().zip(weight).map(|(a, b)| a * b).collect()).collect()
    }

    fn gradient_of(&self, s: &[C]) -> VectorField {
        let i = C::new(0.0, 1.0);
        let parts = (0..3).map(|j| s.iter().zip(&self.xi).map(|(z, x)| i * x[j] * z).collect());
        self.band_field(parts)
    }

    /// Linear pieces only: coupling, grad-div and damping.
    fn linear_pieces(&self, u: &VectorField, w: &VectorField) -> [VectorField; 4] {
        let cw = curl(w);
        let cu = curl(u);
        let dw = divergence(w);
        let mut comps: Vec<&[C]> = w.components();
        comps.extend(cw.components());
        comps.extend(cu.components());
        comps.push(dw.coefficients());
        let phys = self.col.to_fine(&comps);
        let mut products = self.product(&self.theta2, &phys[0..9]);
        products.extend(self.product(&self.theta, &phys[9..10]));
        let mut band = self.col.to_band(&products).into_iter();
        let damping = self.band_field(band.by_ref());
        let coupling_u = self.band_field(band.by_ref());
        let coupling_w = self.band_field(band.by_ref());
        let grad_div = self.gradient_of(&band.next().unwrap());
        [coupling_u, coupling_w, grad_div, damping]
    }

    /// All right-hand-side pieces at `state`.
    pub fn terms(&self, state: &State) -> Terms {
        let u = state.u.dealiased();
        let w = state.omega.dealiased();
        let [coupling_u, coupling_w, grad_div, damping] = self.linear_pieces(&u, &w);
        let du = divergence(&u);
        let mut comps: Vec<&[C]> = u.components();
        comps.extend(w.components());
        comps.push(du.coefficients());
        let mut phys = self.col.to_fine(&comps);
        let div_u = phys.pop().unwrap();
        let w_phys = phys.split_off(3);
        let ku = skew_advection(&self.col, &phys, &div_u, &phys, &self.theta);
        let kw = skew_advection(&self.col, &phys, &div_u, &w_phys, &self.theta);
        let advection_u = self.band_field(self.col.to_band(&ku).into_iter());
        let advection_w = self.band_field(self.col.to_band(&kw).into_iter());
        Terms { advection_u, advection_w, coupling_u, coupling_w, grad_div, damping }
    }

    /// Assembled right-hand side before the resolvent, without the factor lambda.
    pub fn rhs(&self, t: &Terms) -> State {
        let u = &leray_project(&(&(&t.coupling_u * 0.5) - &t.advection_u)) + &self.f;
        let w = &(&(&t.grad_div - &t.advection_w) - &(&t.damping * self.kappa)) + &(&(&t.coupling_w * 0.5) + &self.g);
        State { u, omega: w }
    }

    /// Nonlinear and forcing part `N(U)`.
    pub fn nonlinear(&self, t: &Terms) -> State {
        State { u: &leray_project(&-&t.advection_u) + &self.f, omega: &self.g - &t.advection_w }
    }

    /// Linear part `L(V)`: coupling, grad-div and damping.
    pub fn linear(&self, state: &State) -> State {
        let [cu, cw, gd, dmp] = self.linear_pieces(&state.u.dealiased(), &state.omega.dealiased());
        let u = leray_project(&(&cu * 0.5));
        let w = &(&gd - &(&dmp * self.kappa)) + &(&cw * 0.5);
        State { u, omega: w }
    }

    /// Applies `(eps Delta^2 - Delta)^{-1}`; the zero mode is dropped.
    pub fn resolve(&self, s: &State) -> State {
        let r = |v: &VectorField| v.map_components(|_, k, z| z * self.symbol[k]);
        State { u: leray_project(&r(&s.u)), omega: r(&s.omega) }
    }

    /// Applies `eps Delta^2 - Delta`.
    pub fn forward(&self, s: &State) -> State {
        let xi2 = self.grid.xi_squared();
        let a = |v: &VectorField| v.map_components(|_, k, z| z * (self.epsilon * xi2[k] * xi2[k] + xi2[k]));
        State { u: a(&s.u), omega: a(&s.omega) }
    }

    /// `T(U)` without lambda.
    pub fn apply_t(&self, state: &State) -> Result<State> {
        let out = self.resolve(&self.rhs(&self.terms(state)));
        if !out.is_finite() {
            return Err(Error::NonFinite("T(U)"));
        }
        Ok(out)
    }

    pub(crate) fn packed_len(&self) -> usize {
        12 * self.band.len()
    }

    /// Real coordinates of the band modes (zero mode excluded).
    pub(crate) fn pack(&self, s: &State) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.packed_len());
        for v in [&s.u, &s.omega] {
            for c in v.components() {
                for &k in &self.band {
                    out.push(c[k].re);
                    out.push(c[k].im);
                }
            }
        }
        out
    }

    pub(crate) fn unpack(&self, x: &[f64]) -> State {
        let nb = self.band.len();
        let comp = |j: usize| {
            let mut c = vec![C::new(0.0, 0.0); self.grid.len()];
            for (m, &k) in self.band.iter().enumerate() {
                let o = 2 * (j * nb + m);
                c[k] = C::new(x[o], x[o + 1]);
            }
            c
        };
        let u = VectorField::from_raw(self.grid, [comp(0), comp(1), comp(2)]);
        let w = VectorField::from_raw(self.grid, [comp(3), comp(4), comp(5)]);
        State { u, omega: w }
    }

    /// Inner-product weights matching `||.||_{H^1}^2 + eps ||.||_{H^2}^2`.
    pub(crate) fn packed_weights(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.packed_len());
        for _ in 0..6 {
            for w in &self.weights {
                out.push(*w);
                out.push(*w);
            }
        }
        out
    }
}

/// `T(U)` for the given parameters, without lambda.
pub fn apply_t(state: &State, params: &SolverParams) -> Result<State> {
    if state.grid() != params.grid() {
        return Err(Error::GridMismatch);
    }
    System::new(params)?.apply_t(state)
}
