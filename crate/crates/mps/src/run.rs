use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use log::{info, warn};
use micropolar::operators::{laplacian_scalar, pressure_from_velocity, pressure_source};
use micropolar::solver::{continuation, homotopy_scan, picard_solve, SolveFailure, State, TraceRow};
use micropolar::spectral::{sobolev_norm, ScalarField, VectorField};
use micropolar::verification::{
    decay_scan, energy_ledger, liouville_ledger, regularity_ladder, relative_divergence, residuals, trilinear_nullity,
    LadderReport, LedgerReport, ResidualMode, ResidualReport, Shape,
};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::config::{Command, Config, ConfigError, Init};
use crate::report::{
    write_continuation_csv, write_decay_csv, write_homotopy_csv, write_json, write_ledger_csv, write_trace_csv,
};
use crate::snapshot::{read_snapshot, write_snapshot, Snapshot, SnapshotError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("snapshot: {0}")]
    Snapshot(#[from] SnapshotError),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    NotConverged(String),
    #[error("output: {0}")]
    Io(#[from] io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::NotConverged(_) => EXIT_NOT_CONVERGED,
            _ => EXIT_INPUT,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RunError::Config(_) => "config",
            RunError::Snapshot(_) => "snapshot",
            RunError::Input(_) => "input",
            RunError::NotConverged(_) => "not_converged",
            RunError::Io(_) => "io",
        }
    }
}

fn input(e: impl std::fmt::Display) -> RunError {
    RunError::Input(e.to_string())
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    exit_code: i32,
    outputs: &'a [String],
    config: &'a Config,
}

struct Outputs {
    dir: PathBuf,
    files: Vec<String>,
}

impl Outputs {
    fn create(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), files: Vec::new() })
    }

    fn path(&mut self, name: &str) -> PathBuf {
        self.files.push(name.to_string());
        self.dir.join(name)
    }
}

/// Writes `diagnostic.json` describing a failed run.
pub fn write_diagnostic(dir: &Path, error: &RunError, details: serde_json::Value) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join("diagnostic.json");
    let body = json!({
        "exit_code": error.exit_code(),
        "kind": error.kind(),
        "message": error.to_string(),
        "details": details,
    });
    write_json(&path, &body)?;
    Ok(path)
}

/// Runs the configured command and returns the process exit code.
pub fn run(config: &Config) -> i32 {
    let mut out = match Outputs::create(&config.run.output_dir) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: cannot create {}: {e}", config.run.output_dir.display());
            return EXIT_INPUT;
        }
    };
    let mut details = serde_json::Value::Null;
    let result = match config.run.command {
        Command::Solve => solve(config, &mut out, &mut details),
        Command::Verify => verify(config, &mut out),
        Command::Liouville => liouville(config, &mut out),
        Command::Sweep => sweep(config, &mut out, &mut details),
    };
    let code = match &result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            match write_diagnostic(&out.dir, e, details) {
                Ok(_) => out.files.push("diagnostic.json".into()),
                Err(io) => warn!("could not write diagnostic: {io}"),
            }
            e.exit_code()
        }
    };
    out.files.push("manifest.json".into());
    let manifest = Manifest {
        tool: "mps",
        version: env!("CARGO_PKG_VERSION"),
        command: config.run.command.name(),
        exit_code: code,
        outputs: &out.files,
        config,
    };
    if let Err(e) = write_json(&out.dir.join("manifest.json"), &manifest) {
        eprintln!("error: cannot write manifest: {e}");
        return EXIT_INPUT;
    }
    code
}

#[derive(Serialize)]
struct SolveSummary<'a> {
    iterations: usize,
    last: Option<&'a TraceRow>,
    original: ResidualReport,
    mollified: ResidualReport,
    energy: LedgerReport,
}

fn initial_state(config: &Config) -> Result<State, RunError> {
    let grid = config.grid()?;
    Ok(match config.run.init {
        Init::Zero => State::zeros(grid),
        Init::Random => State::random(grid, config.run.seed, config.run.init_h1),
    })
}

fn state_snapshot(state: &State, p: ScalarField, f: &VectorField, g: &VectorField) -> Snapshot {
    Snapshot::new(state.grid())
        .with_vector("u", state.u.clone())
        .with_vector("omega", state.omega.clone())
        .with_scalar("p", p)
        .with_vector("f", f.clone())
        .with_vector("g", g.clone())
}

fn solve(config: &Config, out: &mut Outputs, details: &mut serde_json::Value) -> Result<(), RunError> {
    let params = config.solver_params()?;
    let init = initial_state(config)?;
    info!("solve: n = {}, L = {}, eps = {}, R = {}", config.grid.n, config.grid.half_period, params.epsilon, params.radius);
    match picard_solve(&params, init) {
        Ok((state, trace)) => {
            info!("converged in {} iterations", trace.len());
            write_trace_csv(&out.path("trace.csv"), &trace)?;
            let p = pressure_from_velocity(&state.u);
            let original = residuals(&state, Some(&p), &params, ResidualMode::Original).map_err(input)?;
            let mollified = residuals(&state, None, &params, ResidualMode::Mollified).map_err(input)?;
            let energy = energy_ledger(&state, &params, params.lambda).map_err(input)?;
            write_snapshot(out.path("solution.mps"), &state_snapshot(&state, p, &params.f, &params.g))?;
            let summary = SolveSummary { iterations: trace.len(), last: trace.last(), original, mollified, energy };
            write_json(&out.path("summary.json"), &summary)?;
            Ok(())
        }
        Err(err) => {
            write_trace_csv(&out.path("trace.csv"), &err.trace)?;
            *details = json!({ "iterations": err.trace.len(), "last": err.trace.last() });
            if let Some(last) = &err.last {
                if last.is_finite() {
                    let p = pressure_from_velocity(&last.u);
                    write_snapshot(out.path("last_iterate.mps"), &state_snapshot(last, p, &params.f, &params.g))?;
                }
            }
            Err(match err.failure {
                SolveFailure::Invalid(e) => input(e),
                other => RunError::NotConverged(other.to_string()),
            })
        }
    }
}

struct Loaded {
    state: State,
    p: ScalarField,
}

fn load_state(config: &Config) -> Result<Loaded, RunError> {
    let path = config.run.snapshot.as_ref().ok_or_else(|| input("run.snapshot is required"))?;
    let snap = read_snapshot(path)?;
    if snap.grid != config.grid()? {
        return Err(input(format!(
            "snapshot grid (n = {}, L = {}) differs from the configured grid",
            snap.grid.n(),
            snap.grid.half_period()
        )));
    }
    let u = snap.require_vector("u")?;
    let omega = snap.require_vector("omega")?;
    let p = match snap.scalar("p") {
        Some(p) => p?,
        None => pressure_from_velocity(&u),
    };
    Ok(Loaded { state: State::new(u, omega).map_err(input)?, p })
}

#[derive(Serialize)]
struct VerifyReport {
    original: ResidualReport,
    mollified: ResidualReport,
    energy: LedgerReport,
    relative_divergence: f64,
    pressure_poisson: f64,
    trilinear_u: f64,
    trilinear_omega: f64,
    ladder: LadderReport,
}

fn pressure_poisson(loaded: &Loaded) -> f64 {
    let source = pressure_source(&loaded.state.u);
    let scale = sobolev_norm(&source, 0.0).unwrap();
    let residual = &laplacian_scalar(&loaded.p).scaled(-1.0) - &source;
    let r = sobolev_norm(&residual, 0.0).unwrap();
    if scale == 0.0 {
        r
    } else {
        r / scale
    }
}

fn verify(config: &Config, out: &mut Outputs) -> Result<(), RunError> {
    let params = config.solver_params()?;
    let loaded = load_state(config)?;
    let s = &loaded.state;
    let original = residuals(s, Some(&loaded.p), &params, ResidualMode::Original).map_err(input)?;
    let mollified = residuals(s, None, &params, ResidualMode::Mollified).map_err(input)?;
    let energy = energy_ledger(s, &params, params.lambda).map_err(input)?;
    let cutoff = params.cutoff().map_err(input)?;
    let (trilinear_u, trilinear_omega) = trilinear_nullity(&s.u, &s.omega, &cutoff).map_err(input)?;
    let ladder = regularity_ladder(&s.u, &s.omega, params.kappa).map_err(input)?;
    let report = VerifyReport {
        original,
        mollified,
        relative_divergence: relative_divergence(&s.u),
        pressure_poisson: pressure_poisson(&loaded),
        trilinear_u,
        trilinear_omega,
        ladder,
        energy,
    };
    write_ledger_csv(&out.path("energy_ledger.csv"), std::slice::from_ref(&report.energy))?;
    write_json(&out.path("verify.json"), &report)?;
    Ok(())
}

fn liouville(config: &Config, out: &mut Outputs) -> Result<(), RunError> {
    let loaded = load_state(config)?;
    let l = &config.liouville;
    let s = &loaded.state;
    let ledger = liouville_ledger(&s.u, &s.omega, &loaded.p, &l.radii, l.q, config.params.kappa).map_err(input)?;
    write_ledger_csv(&out.path("liouville_ledger.csv"), &ledger)?;
    let u = decay_scan(&s.u, &l.radii, &[(l.q, Shape::Annulus), (6.0, Shape::Annulus), (6.0, Shape::Ball)]).map_err(input)?;
    let w = decay_scan(&s.omega, &l.radii, &[(2.0, Shape::Annulus), (6.0, Shape::Annulus), (6.0, Shape::Ball)]).map_err(input)?;
    let p = decay_scan(&loaded.p, &l.radii, &[(l.q / 2.0, Shape::Annulus)]).map_err(input)?;
    write_decay_csv(&out.path("decay.csv"), &[("u", &u), ("omega", &w), ("p", &p)])?;
    write_json(&out.path("liouville.json"), &json!({ "q": l.q, "ledger": ledger, "decay": { "u": u, "omega": w, "p": p } }))?;
    Ok(())
}

fn sweep(config: &Config, out: &mut Outputs, details: &mut serde_json::Value) -> Result<(), RunError> {
    let params = config.solver_params()?;
    let s = &config.sweep;
    let cells = continuation(&params, &s.epsilon_list, &s.radii).map_err(input)?;
    write_continuation_csv(&out.path("continuation.csv"), &cells)?;
    let points = homotopy_scan(&params, &s.lambda_list).map_err(input)?;
    write_homotopy_csv(&out.path("homotopy.csv"), &points)?;
    write_json(&out.path("sweep.json"), &json!({ "continuation": cells, "homotopy": points }))?;
    let failed_cells: Vec<_> = cells.iter().filter(|c| !c.converged).map(|c| json!({"epsilon": c.epsilon, "R": c.radius, "failure": c.failure})).collect();
    let failed_points: Vec<_> = points.iter().filter(|p| !p.converged).map(|p| json!({"lambda": p.lambda, "failure": p.failure})).collect();
    if failed_cells.is_empty() && failed_points.is_empty() {
        return Ok(());
    }
    let message = format!("{} continuation cells and {} homotopy points did not converge", failed_cells.len(), failed_points.len());
    *details = json!({ "continuation": failed_cells, "homotopy": failed_points });
    Err(RunError::NotConverged(message))
}
