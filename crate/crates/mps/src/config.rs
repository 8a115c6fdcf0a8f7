use std::path::{Path, PathBuf};

use micropolar::solver::{single_mode_forcing, gaussian_bump_forcing, SolverParams};
use micropolar::spectral::{Grid, VectorField};
use micropolar::verification::Q_WINDOW;
use micropolar::Error as CoreError;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::snapshot::read_snapshot;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path} {reason}")]
    Range { path: String, reason: String },
    #[error("--set {0}: expected key=value")]
    Override(String),
    #[error("{path}: file {file} does not exist")]
    MissingFile { path: String, file: PathBuf },
    #[error("{path}: {message}")]
    Load { path: String, message: String },
}

fn range(path: impl Into<String>, reason: impl Into<String>) -> ConfigError {
    ConfigError::Range { path: path.into(), reason: reason.into() }
}

fn from_core(section: &str, e: CoreError) -> ConfigError {
    match e {
        CoreError::InvalidParameter { name, reason } => range(format!("{section}.{name}"), reason),
        CoreError::OutsideBox { radius, limit } => {
            let key = if section == "params" { "params.R" } else { section };
            range(key, format!("puts the support radius {radius} outside the box half-width {limit}"))
        }
        other => range(section, other.to_string()),
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub grid: GridConfig,
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default)]
    pub forcing: ForcingConfig,
    pub run: RunConfig,
    #[serde(default)]
    pub liouville: LiouvilleConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    #[serde(rename = "L")]
    pub half_period: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsConfig {
    pub epsilon: f64,
    #[serde(rename = "R")]
    pub radius: f64,
    pub kappa: f64,
    pub lambda: f64,
    pub damping: f64,
    pub max_iters: usize,
    pub tol: f64,
    pub padding: usize,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self { epsilon: 0.5, radius: 2.0, kappa: 100.0, lambda: 1.0, damping: 0.5, max_iters: 200, tol: 1e-10, padding: 1 }
    }
}

/// Which equation a synthetic forcing drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    #[default]
    F,
    G,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ForcingConfig {
    #[default]
    Zero,
    SingleMode {
        #[serde(default)]
        target: Target,
        mode: [i64; 3],
        direction: [f64; 3],
        hm1_norm: f64,
    },
    GaussianBump {
        #[serde(default)]
        target: Target,
        center: [f64; 3],
        width: f64,
        direction: [f64; 3],
        hm1_norm: f64,
    },
    /// Fields named `f` and `g` of a snapshot; a missing one is zero.
    SnapshotFile { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Solve,
    Verify,
    Liouville,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Verify => "verify",
            Command::Liouville => "liouville",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Init {
    #[default]
    Zero,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub init: Init,
    /// `||u||_{H^1} + ||w||_{H^1}` of a random initial state.
    #[serde(default = "default_init_h1")]
    pub init_h1: f64,
    /// Input snapshot for `verify` and `liouville`.
    #[serde(default)]
    pub snapshot: Option<PathBuf>,
}

fn default_init_h1() -> f64 {
    1e-3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LiouvilleConfig {
    #[serde(rename = "R_list")]
    pub radii: Vec<f64>,
    pub q: f64,
}

impl Default for LiouvilleConfig {
    fn default() -> Self {
        Self { radii: vec![1.0, 2.0], q: 3.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub epsilon_list: Vec<f64>,
    #[serde(rename = "R_list")]
    pub radii: Vec<f64>,
    pub lambda_list: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { epsilon_list: vec![0.5, 0.25, 0.125], radii: vec![1.0, 2.0, 3.0], lambda_list: vec![0.25, 0.5, 0.75, 1.0] }
    }
}

/// Sets `a.b.c = value` in a JSON tree; the value is parsed as JSON when it
/// can be and kept as a string otherwise.
pub fn apply_override(root: &mut Value, assignment: &str) -> Result<(), ConfigError> {
    let (key, raw) = assignment.split_once('=').ok_or_else(|| ConfigError::Override(assignment.to_string()))?;
    let key = key.trim();
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(ConfigError::Override(assignment.to_string()));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    for part in &parts[..parts.len() - 1] {
        if !node.is_object() {
            return Err(ConfigError::Override(assignment.to_string()));
        }
        node = node.as_object_mut().unwrap().entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    match node.as_object_mut() {
        Some(map) => {
            map.insert(parts[parts.len() - 1].to_string(), value);
            Ok(())
        }
        None => Err(ConfigError::Override(assignment.to_string())),
    }
}

/// Parses, applies overrides and validates.
pub fn parse_config_with(text: &str, overrides: &[String]) -> Result<Config, ConfigError> {
    resolve_config(text, overrides, None, None)
}

/// Like [`parse_config_with`], then forces `run.command` and `run.output_dir`
/// when given.
pub fn resolve_config(
    text: &str,
    overrides: &[String],
    command: Option<Command>,
    output_dir: Option<&Path>,
) -> Result<Config, ConfigError> {
    let mut value: Value = serde_json::from_str(text).map_err(|e| ConfigError::Json(e.to_string()))?;
    if !value.is_object() {
        return Err(ConfigError::Json("top level must be an object".into()));
    }
    for o in overrides {
        apply_override(&mut value, o)?;
    }
    if command.is_some() || output_dir.is_some() {
        let run = value.as_object_mut().unwrap().entry("run").or_insert_with(|| Value::Object(Default::default()));
        let run = run.as_object_mut().ok_or_else(|| ConfigError::Schema { path: "run".into(), message: "must be an object".into() })?;
        if let Some(c) = command {
            run.insert("command".into(), Value::String(c.name().into()));
        }
        if let Some(dir) = output_dir {
            run.insert("output_dir".into(), Value::String(dir.to_string_lossy().into_owned()));
        }
    }
    let config: Config = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        ConfigError::Schema { path: if path == "." { "config".into() } else { path }, message: e.into_inner().to_string() }
    })?;
    config.validate()?;
    Ok(config)
}

pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    parse_config_with(text, &[])
}

impl Config {
    pub fn grid(&self) -> Result<Grid, ConfigError> {
        Grid::new(self.grid.n, self.grid.half_period).map_err(|e| range("grid", e.to_string()))
    }

    /// Forcing pair `(f, g)` on the configured grid.
    pub fn forcing_fields(&self) -> Result<(VectorField, VectorField), ConfigError> {
        let grid = self.grid()?;
        let zero = VectorField::zeros(grid);
        let place = |target: Target, v: VectorField| match target {
            Target::F => (v, zero.clone()),
            Target::G => (zero.clone(), v),
        };
        match &self.forcing {
            ForcingConfig::Zero => Ok((zero.clone(), zero.clone())),
            ForcingConfig::SingleMode { target, mode, direction, hm1_norm } => {
                let v = single_mode_forcing(grid, *mode, *direction, *hm1_norm).map_err(|e| from_core("forcing", e))?;
                Ok(place(*target, v))
            }
            ForcingConfig::GaussianBump { target, center, width, direction, hm1_norm } => {
                let v = gaussian_bump_forcing(grid, *center, *width, *direction, *hm1_norm)
                    .map_err(|e| from_core("forcing", e))?;
                Ok(place(*target, v))
            }
            ForcingConfig::SnapshotFile { path } => {
                let snap = read_snapshot(path).map_err(|e| ConfigError::Load { path: "forcing.path".into(), message: e.to_string() })?;
                if snap.grid != grid {
                    return Err(range("forcing.path", "snapshot grid differs from the configured grid"));
                }
                let get = |name: &str| {
                    snap.vector(name)
                        .map(|r| r.map_err(|e| ConfigError::Load { path: "forcing.path".into(), message: e.to_string() }))
                        .unwrap_or_else(|| Ok(zero.clone()))
                };
                Ok((get("f")?, get("g")?))
            }
        }
    }

    /// Solver parameters including the forcing.
    pub fn solver_params(&self) -> Result<SolverParams, ConfigError> {
        let grid = self.grid()?;
        let (f, g) = self.forcing_fields()?;
        let p = &self.params;
        let params = SolverParams {
            epsilon: p.epsilon,
            radius: p.radius,
            kappa: p.kappa,
            lambda: p.lambda,
            damping: p.damping,
            max_iters: p.max_iters,
            tol: p.tol,
            padding: p.padding,
            f: VectorField::zeros(grid),
            g: VectorField::zeros(grid),
        };
        let params = params.with_forcing(f, g).map_err(|e| match e {
            CoreError::NotSolenoidal(d) => range("forcing", format!("f must be divergence-free (relative divergence {d:e})")),
            other => from_core("forcing", other),
        })?;
        params.validate().map_err(|e| from_core("params", e))?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let grid = self.grid()?;
        if let ForcingConfig::SnapshotFile { path } = &self.forcing {
            if !path.exists() {
                return Err(ConfigError::MissingFile { path: "forcing.path".into(), file: path.clone() });
            }
        }
        if let Some(path) = &self.run.snapshot {
            if !path.exists() {
                return Err(ConfigError::MissingFile { path: "run.snapshot".into(), file: path.clone() });
            }
        }
        if matches!(self.run.command, Command::Verify | Command::Liouville) && self.run.snapshot.is_none() {
            return Err(range("run.snapshot", format!("is required by the {} command", self.run.command.name())));
        }
        if !(self.run.init_h1 >= 0.0 && self.run.init_h1.is_finite()) {
            return Err(range("run.init_h1", "must be finite and >= 0"));
        }
        self.solver_params()?;

        let l = &self.liouville;
        if !(l.q >= Q_WINDOW.0 && l.q <= Q_WINDOW.1) {
            return Err(range("liouville.q", format!("must be in [{}, {}]", Q_WINDOW.0, Q_WINDOW.1)));
        }
        if l.radii.is_empty() {
            return Err(range("liouville.R_list", "must be nonempty"));
        }
        for &r in &l.radii {
            if !(r >= 1.0 && r.is_finite()) {
                return Err(range("liouville.R_list", "entries must be >= 1"));
            }
            if 2.0 * r > grid.box_radius() * (1.0 + 1e-12) {
                return Err(range("liouville.R_list", format!("entry {r}: 2R exceeds the box half-width {}", grid.box_radius())));
            }
        }

        let s = &self.sweep;
        if s.epsilon_list.is_empty() || s.radii.is_empty() || s.lambda_list.is_empty() {
            return Err(range("sweep", "lists must be nonempty"));
        }
        if s.epsilon_list.iter().any(|e| !(*e > 0.0 && *e <= 1.0)) {
            return Err(range("sweep.epsilon_list", "entries must be in (0,1]"));
        }
        if s.epsilon_list.windows(2).any(|w| w[1] > w[0]) {
            return Err(range("sweep.epsilon_list", "must be descending"));
        }
        if s.radii.iter().any(|r| !(*r >= 1.0 && 2.0 * r <= grid.box_radius() * (1.0 + 1e-12))) {
            return Err(range("sweep.R_list", "entries must be >= 1 with 2R inside the box"));
        }
        if s.radii.windows(2).any(|w| w[1] < w[0]) {
            return Err(range("sweep.R_list", "must be ascending"));
        }
        if s.lambda_list.iter().any(|l| !(0.0..=1.0).contains(l)) {
            return Err(range("sweep.lambda_list", "entries must be in [0,1]"));
        }
        Ok(())
    }
}
