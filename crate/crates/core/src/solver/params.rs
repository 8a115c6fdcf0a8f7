use crate::error::{invalid, Error, Result};
use crate::operators::{check_epsilon, divergence, leray_project, CutoffSpec};
use crate::spectral::{sobolev_norm, Grid, VectorField};

/// Scalar knobs and forcing of the mollified fixed-point problem.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverParams {
    pub epsilon: f64,
    pub radius: f64,
    pub kappa: f64,
    pub lambda: f64,
    pub damping: f64,
    pub max_iters: usize,
    pub tol: f64,
    /// Collocation refinement for pointwise products (1 = plain 2/3 rule).
    pub padding: usize,
    pub f: VectorField,
    pub g: VectorField,
}

impl SolverParams {
    /// Defaults with zero forcing on `grid`.
    pub fn new(grid: Grid) -> Self {
        Self {
            epsilon: 0.5,
            radius: 2.0,
            kappa: 100.0,
            lambda: 1.0,
            damping: 0.5,
            max_iters: 200,
            tol: 1e-10,
            padding: 1,
            f: VectorField::zeros(grid),
            g: VectorField::zeros(grid),
        }
    }

    pub fn grid(&self) -> Grid {
        self.f.grid()
    }

    /// Replaces the forcing; `f` must be divergence-free.
    pub fn with_forcing(mut self, f: VectorField, g: VectorField) -> Result<Self> {
        if f.grid() != g.grid() {
            return Err(Error::GridMismatch);
        }
        check_solenoidal(&f)?;
        self.f = f;
        self.g = g;
        Ok(self)
    }

    pub fn cutoff(&self) -> Result<CutoffSpec> {
        CutoffSpec::theta(self.radius)
    }

    pub fn validate(&self) -> Result<()> {
        check_epsilon(self.epsilon)?;
        let cutoff = self.cutoff().map_err(|_| invalid("R", "must be >= 1"))?;
        cutoff.check_in_box(&self.grid())?;
        if !(self.kappa >= 1.0 && self.kappa.is_finite()) {
            return Err(invalid("kappa", "must be >= 1"));
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(invalid("lambda", "must be in [0,1]"));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(invalid("damping", "must be in (0,1]"));
        }
        if self.max_iters == 0 {
            return Err(invalid("max_iters", "must be positive"));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(invalid("tol", "must be positive"));
        }
        if !(1..=4).contains(&self.padding) {
            return Err(invalid("padding", "must be in 1..=4"));
        }
        if self.f.grid() != self.g.grid() {
            return Err(Error::GridMismatch);
        }
        if !self.f.is_finite() || !self.g.is_finite() {
            return Err(Error::NonFinite("forcing"));
        }
        check_solenoidal(&self.f)
    }
}

fn check_solenoidal(f: &VectorField) -> Result<()> {
    let norm = sobolev_norm(f, 0.0)?;
    if norm == 0.0 {
        return Ok(());
    }
    let rel = sobolev_norm(&divergence(f), 0.0)? / norm;
    if rel > 1e-10 {
        return Err(Error::NotSolenoidal(rel));
    }
    Ok(())
}

/// Projects `f` onto divergence-free fields, for callers building forcings.
pub fn solenoidal_part(f: &VectorField) -> VectorField {
    leray_project(f)
}
