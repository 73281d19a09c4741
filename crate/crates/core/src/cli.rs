//! JSON-configured experiment runner behind the `torus-control` binary.
//!
//! Every subcommand reads one [`ExperimentConfig`], validates all of it
//! before computing anything, and writes `<subcommand>.json` (a report with
//! `{config_echo, versions, results}`) and, where the pipeline produces a
//! time series or sweep, `<subcommand>.csv` into the output directory.
//! Reports carry no timestamps, so identical configs give identical bytes.
//!
//! Exit codes: 0 success, 2 validation error, 3 numerical failure (the
//! report then carries `{error: {kind, message}}`), 64 unknown subcommand.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hum::{drive_linear, observability_constant, solve_hum, GramianSpec, LinearDrive};
use crate::io;
use crate::nls::{evolve, global_control, stabilize, NlsParams, StabilizeOptions};
use crate::quadrature::QuadRule;
use crate::resolvent::{miller_cost_bound, minimal_feasible_m, refined_sweep, SweepPoint};
use crate::sampling::{random_smooth_state, random_state, rng, StateRng};
use crate::spectral::{make_window, CutoffWindow, FourierState, GridSpec, Interval, WindowKind};
use crate::tensor::{strip_observability_constant, StripWindow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_UNKNOWN_SUBCOMMAND: i32 = 64;

/// Slack in the Miller cross-check `C_T ≤ slack · C_bound`.
pub const MILLER_SLACK: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Linear (optionally controlled) or undamped cubic evolution.
    Simulate,
    /// HUM control of random data, verified by forward integration.
    Control,
    /// Observability constant `C_T` (with an optional Miller cross-check).
    Observability,
    /// Best resolvent constants over a λ grid and the Miller time.
    ResolventSweep,
    /// Strip versus base observability constants.
    TensorCheck,
    /// Damped cubic evolution to a mass threshold with decay-rate fitting.
    Stabilize,
    /// Stabilize-then-control from `u0` to rest and from rest to `u1`.
    GlobalControl,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Control => "control",
            Command::Observability => "observability",
            Command::ResolventSweep => "resolvent-sweep",
            Command::TensorCheck => "tensor-check",
            Command::Stabilize => "stabilize",
            Command::GlobalControl => "global-control",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
    #[default]
    Both,
}

impl OutputFormat {
    fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    fn json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }
}

#[derive(Debug, Parser)]
#[command(name = "torus-control", version, about = "Control and observability experiments on the torus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Experiment configuration (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `output.dir`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Random seed (overrides `seed`).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Artifact formats (overrides `output.formats`).
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub dim: usize,
    #[serde(rename = "N")]
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WindowConfig {
    /// Intervals `[a, b]` of the unit circle (first axis in 2D).
    pub omega: Vec<Interval>,
    pub kind: WindowKind,
    pub transition_width: f64,
}

impl Default for WindowConfig {
    fn default() -> Self {
        Self {
            omega: vec![Interval(0.0, 0.3)],
            kind: WindowKind::Smooth,
            transition_width: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureConfig {
    pub rule: QuadRule,
    /// Node count; resolved from the grid and horizon when absent.
    pub n_quad: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 2000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NlsConfig {
    pub sigma: f64,
    pub dt: f64,
    pub dealias: bool,
    /// `simulate`: integrate the cubic equation instead of the linear one.
    pub nonlinear: bool,
    /// `stabilize`: stop once `mass ≤ target_mass_ratio · mass(0)`.
    pub target_mass_ratio: f64,
    /// `global-control`: damping runs until `∥u∥ ≤ mass_threshold`.
    pub mass_threshold: f64,
    /// Picard iteration cap for local control.
    pub max_picard: usize,
}

impl Default for NlsConfig {
    fn default() -> Self {
        Self {
            sigma: -1.0,
            dt: 1e-3,
            dealias: true,
            nonlinear: false,
            target_mass_ratio: 1e-3,
            mass_threshold: 0.1,
            max_picard: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    /// Defaults to `∓(2π N/2)²` when absent.
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub n_points: usize,
    /// Observation constant; `m_factor × minimal feasible m` when absent.
    pub m: Option<f64>,
    pub m_factor: f64,
    pub rel_tol: f64,
    pub max_doublings: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            lambda_min: None,
            lambda_max: None,
            n_points: 512,
            m: None,
            m_factor: 1.5,
            rel_tol: 0.05,
            max_doublings: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StateConfig {
    /// Highest mode of the random data; full-band when absent.
    pub band: Option<i64>,
    /// L² norm.
    pub norm: f64,
}

impl Default for StateConfig {
    fn default() -> Self {
        Self { band: Some(8), norm: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ObservabilityConfig {
    /// Resolvent-sweep report to cross-check against.
    pub sweep_report: Option<PathBuf>,
    /// When set with `sweep_report`, `T = horizon_factor · π√M_sup`.
    pub horizon_factor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub formats: OutputFormat,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            formats: OutputFormat::Both,
        }
    }
}

/// Experiment configuration. Every field but `grid` has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub grid: GridConfig,
    #[serde(default)]
    pub window: WindowConfig,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub nls: NlsConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub initial: StateConfig,
    #[serde(default = "default_target")]
    pub target: StateConfig,
    /// Control adjoint state for `simulate`; free evolution when absent.
    #[serde(default)]
    pub phi0: Option<FourierState>,
    #[serde(default)]
    pub observability: ObservabilityConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_horizon() -> f64 {
    1.0
}

fn default_target() -> StateConfig {
    StateConfig { band: Some(8), norm: 0.05 }
}

impl ExperimentConfig {
    pub fn new(dim: usize, n: usize) -> Self {
        Self {
            grid: GridConfig { dim, n },
            window: WindowConfig::default(),
            horizon: default_horizon(),
            quadrature: QuadratureConfig::default(),
            solver: SolverConfig::default(),
            nls: NlsConfig::default(),
            sweep: SweepConfig::default(),
            seed: 0,
            initial: StateConfig::default(),
            target: default_target(),
            phi0: None,
            observability: ObservabilityConfig::default(),
            output: OutputConfig::default(),
        }
    }

    /// Parses JSON, reporting the offending field path on failure.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::InvalidParameter(format!("config field `{path}`: {}", e.into_inner()))
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        GridSpec::new(self.grid.dim, self.grid.n).map_err(|e| field("grid", e))
    }

    pub fn window_on(&self, grid: GridSpec) -> Result<CutoffWindow> {
        make_window(grid, &self.window.omega, self.window.transition_width, self.window.kind)
            .map_err(|e| field("window", e))
    }

    pub fn gramian_spec(&self) -> Result<GramianSpec> {
        let grid = self.grid_spec()?;
        self.gramian_spec_at(grid, self.horizon)
    }

    fn gramian_spec_at(&self, grid: GridSpec, horizon: f64) -> Result<GramianSpec> {
        let mut spec = GramianSpec::new(horizon, self.window_on(grid)?)
            .map_err(|e| field("horizon", e))?
            .with_rule(self.quadrature.rule);
        if let Some(n) = self.quadrature.n_quad {
            spec = spec.with_n_quad(n);
        }
        spec.validate().map_err(|e| field("quadrature", e))?;
        Ok(spec)
    }

    pub fn nls_params(&self) -> NlsParams {
        NlsParams::new(self.nls.sigma, self.nls.dt).with_dealias(self.nls.dealias)
    }

    /// Checks every sub-configuration the subcommand touches.
    pub fn validate(&self, command: Command) -> Result<()> {
        let grid = self.grid_spec()?;
        self.window_on(grid)?;
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::InvalidParameter(format!("config field `horizon`: must be positive, got {}", self.horizon)));
        }
        self.gramian_spec()?;
        if !(self.solver.tol > 0.0) || self.solver.max_iter == 0 {
            return Err(Error::InvalidParameter("config field `solver`: tol and max_iter must be positive".into()));
        }
        self.nls_params().validate(&grid).map_err(|e| field("nls", e))?;
        if !(self.nls.target_mass_ratio > 0.0 && self.nls.target_mass_ratio < 1.0) {
            return Err(Error::InvalidParameter("config field `nls.target_mass_ratio`: must lie in (0, 1)".into()));
        }
        if !(self.nls.mass_threshold > 0.0) || self.nls.max_picard == 0 {
            return Err(Error::InvalidParameter(
                "config field `nls`: mass_threshold and max_picard must be positive".into(),
            ));
        }
        for (name, s) in [("initial", &self.initial), ("target", &self.target)] {
            if !(s.norm >= 0.0 && s.norm.is_finite()) || s.band.is_some_and(|b| b < 0) {
                return Err(Error::InvalidParameter(format!("config field `{name}`: norm and band must be non-negative")));
            }
        }
        if let Some(phi0) = &self.phi0 {
            phi0.check_grid(&grid).map_err(|e| field("phi0", e))?;
        }
        match command {
            Command::ResolventSweep => {
                if grid.dim() != 1 {
                    return Err(Error::InvalidParameter("config field `grid.dim`: resolvent sweeps are 1D".into()));
                }
                let (lo, hi) = self.lambda_range(&grid);
                if !(hi > lo) || self.sweep.n_points < 2 {
                    return Err(Error::InvalidParameter(
                        "config field `sweep`: need lambda_min < lambda_max and n_points >= 2".into(),
                    ));
                }
                if self.sweep.m.is_some_and(|m| !(m > 0.0)) || !(self.sweep.m_factor >= 1.0) || !(self.sweep.rel_tol > 0.0) {
                    return Err(Error::InvalidParameter(
                        "config field `sweep`: m must be positive, m_factor >= 1, rel_tol > 0".into(),
                    ));
                }
            }
            Command::Observability => {
                if let Some(p) = &self.observability.sweep_report {
                    if !p.is_file() {
                        return Err(Error::InvalidParameter(format!(
                            "config field `observability.sweep_report`: {} does not exist",
                            p.display()
                        )));
                    }
                }
                if self.observability.horizon_factor.is_some_and(|f| !(f > 1.0)) {
                    return Err(Error::InvalidParameter(
                        "config field `observability.horizon_factor`: must exceed 1".into(),
                    ));
                }
            }
            Command::Stabilize | Command::GlobalControl => {
                if self.window.omega.is_empty() {
                    return Err(Error::InvalidParameter("config field `window.omega`: damping needs a window".into()));
                }
            }
            Command::TensorCheck => {
                if grid.dim() != 1 {
                    return Err(Error::InvalidParameter(
                        "config field `grid.dim`: give the per-axis 1D grid for tensor-check".into(),
                    ));
                }
            }
            Command::Simulate | Command::Control => {}
        }
        Ok(())
    }

    fn lambda_range(&self, grid: &GridSpec) -> (f64, f64) {
        let top = grid.max_laplacian_symbol();
        (self.sweep.lambda_min.unwrap_or(-top), self.sweep.lambda_max.unwrap_or(top))
    }
}

fn field(name: &str, e: Error) -> Error {
    if e.is_validation() {
        Error::InvalidParameter(format!("config field `{name}`: {e}"))
    } else {
        e
    }
}

fn draw(grid: GridSpec, s: &StateConfig, rng: &mut StateRng) -> FourierState {
    match s.band {
        Some(band) => random_smooth_state(grid, band, s.norm, rng),
        None => random_state(grid, rng).scale(Complex64::new(s.norm, 0.0)),
    }
}

/// Results of one subcommand, before writing.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub results: Value,
    /// CSV artifact bytes, when the pipeline produces a table.
    pub csv: Option<Vec<u8>>,
}

fn trajectory_csv(drive: &LinearDrive) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    io::write_trajectory_csv(&mut buf, &drive.trajectory)?;
    Ok(buf)
}

/// Executes a validated configuration.
pub fn run(command: Command, config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate(command)?;
    let grid = config.grid_spec()?;
    let mut rng = rng(config.seed);
    match command {
        Command::Simulate => {
            let u0 = draw(grid, &config.initial, &mut rng);
            if config.nls.nonlinear {
                let (u, record) = evolve(&u0, config.horizon, &config.nls_params())?;
                let mut csv = Vec::new();
                io::write_decay_csv(&mut csv, &record)?;
                Ok(RunOutput {
                    results: json!({
                        "equation": "nls",
                        "mass_initial": u0.norm_sqr(),
                        "mass_final": u.norm_sqr(),
                        "relative_mass_drift": record.relative_mass_drift(),
                        "energy_drift": record.energy_drift(),
                        "final_state": u,
                    }),
                    csv: Some(csv),
                })
            } else {
                let spec = config.gramian_spec()?;
                let phi0 = config.phi0.clone().unwrap_or_else(|| FourierState::zeros(grid));
                let drive = drive_linear(&u0, &spec, &phi0)?;
                Ok(RunOutput {
                    results: json!({
                        "equation": "linear",
                        "controlled": config.phi0.is_some(),
                        "mass_initial": u0.norm_sqr(),
                        "mass_final": drive.final_state.norm_sqr(),
                        "final_norm": drive.residual,
                        "n_quad": spec.n_quad,
                        "final_state": drive.final_state,
                    }),
                    csv: Some(trajectory_csv(&drive)?),
                })
            }
        }
        Command::Control => {
            let spec = config.gramian_spec()?;
            let u0 = draw(grid, &config.initial, &mut rng);
            let report = observability_constant(&spec)?;
            let sol = solve_hum(&spec, &u0, config.solver.tol, config.solver.max_iter)?;
            let drive = drive_linear(&u0, &spec, &sol.phi0)?;
            Ok(RunOutput {
                results: json!({
                    "C_T": report.c_t,
                    "lambda_min": report.lambda_min,
                    "n_quad": spec.n_quad,
                    "residual": sol.residual_l2,
                    "relative_residual": sol.residual_l2 / u0.l2_norm().max(f64::MIN_POSITIVE),
                    "iterations": sol.iterations,
                    "phi0": sol.phi0,
                }),
                csv: Some(trajectory_csv(&drive)?),
            })
        }
        Command::Observability => {
            let sweep = match &config.observability.sweep_report {
                Some(p) => Some(read_sweep_summary(p)?),
                None => None,
            };
            let horizon = match (&sweep, config.observability.horizon_factor) {
                (Some(s), Some(f)) => f * s.miller_time,
                _ => config.horizon,
            };
            let spec = config.gramian_spec_at(grid, horizon)?;
            let report = observability_constant(&spec)?;
            let mut results = json!({
                "C_T": report.c_t,
                "lambda_min": report.lambda_min,
                "lambda_max": report.lambda_max,
                "n_quad": report.n_quad,
                "method": report.method,
                "T": horizon,
            });
            if let Some(s) = sweep {
                let bound = miller_cost_bound(s.m_sup, s.m, horizon)?;
                results["miller"] = json!({
                    "M_sup": s.m_sup,
                    "m": s.m,
                    "miller_time": s.miller_time,
                    "cost_bound": bound,
                    "slack": MILLER_SLACK,
                    "ratio": report.c_t / bound,
                    "cross_check": report.c_t.is_finite() && report.c_t <= MILLER_SLACK * bound,
                });
            }
            Ok(RunOutput { results, csv: None })
        }
        Command::ResolventSweep => {
            let window = config.window_on(grid)?;
            let m = match config.sweep.m {
                Some(m) => m,
                None => config.sweep.m_factor * minimal_feasible_m(&window)?,
            };
            let (lo, hi) = config.lambda_range(&grid);
            let result = refined_sweep(
                &window,
                m,
                lo,
                hi,
                config.sweep.n_points,
                config.sweep.rel_tol,
                config.sweep.max_doublings,
            )?;
            let points: Vec<SweepPoint> = result
                .lambda_grid
                .iter()
                .zip(&result.m_of_lambda)
                .map(|(&lambda, &v)| SweepPoint { lambda, m_best: v.is_finite().then_some(v) })
                .collect();
            let mut csv = Vec::new();
            io::write_sweep_csv(&mut csv, &points)?;
            Ok(RunOutput {
                results: json!({
                    "m": m,
                    "M_sup": result.m_sup,
                    "miller_time": result.miller_time,
                    "n_lambda": result.lambda_grid.len(),
                    "grid_spec": grid,
                }),
                csv: Some(csv),
            })
        }
        Command::TensorCheck => {
            let base = config.window_on(grid)?;
            let strip = StripWindow::new(base)?;
            let mut spec = GramianSpec::new(config.horizon, strip.to_window())?.with_rule(config.quadrature.rule);
            if let Some(n) = config.quadrature.n_quad {
                spec = spec.with_n_quad(n);
            }
            let report = strip_observability_constant(&spec)?;
            Ok(RunOutput { results: serde_json::to_value(report).expect("report serializes"), csv: None })
        }
        Command::Stabilize => {
            let u0 = draw(grid, &config.initial, &mut rng);
            let params = config.nls_params().with_damping(config.window_on(grid)?);
            let threshold = config.nls.target_mass_ratio.sqrt() * u0.l2_norm();
            let s = stabilize(&u0, &params, threshold, &StabilizeOptions::default())?;
            let mut csv = Vec::new();
            io::write_decay_csv(&mut csv, &s.record)?;
            Ok(RunOutput {
                results: json!({
                    "gamma": s.gamma_est,
                    "t_reached": s.t_reached,
                    "horizon_cap": s.horizon_cap,
                    "steps": s.steps,
                    "mass_initial": u0.norm_sqr(),
                    "mass_final": s.final_state.norm_sqr(),
                    "mass_balance": s.record.mass_balance(),
                }),
                csv: Some(csv),
            })
        }
        Command::GlobalControl => {
            let spec = config.gramian_spec()?;
            let u0 = draw(grid, &config.initial, &mut rng);
            let u1 = draw(grid, &config.target, &mut rng);
            let params = config.nls_params().with_damping(config.window_on(grid)?);
            let schedule = global_control(
                &u0,
                &u1,
                &spec,
                &params,
                config.nls.mass_threshold,
                config.solver.tol,
                config.nls.max_picard,
                &StabilizeOptions::default(),
            )?;
            let mut csv = Vec::new();
            io::write_decay_csv(&mut csv, &schedule.record)?;
            Ok(RunOutput {
                results: json!({
                    "phases": schedule.phases,
                    "error_to_zero": schedule.error_to_zero,
                    "error_from_zero": schedule.error_from_zero,
                    "gamma_to_zero": schedule.gamma_to_zero,
                    "gamma_from_zero": schedule.gamma_from_zero,
                    "total_time": schedule.total_time(),
                }),
                csv: Some(csv),
            })
        }
    }
}

/// Fields of a resolvent-sweep report used by the Miller cross-check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSummary {
    pub m: f64,
    pub m_sup: f64,
    pub miller_time: f64,
}

pub fn read_sweep_summary(path: &Path) -> Result<SweepSummary> {
    let text = fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidParameter(format!("sweep report {}: {e}", path.display())))?;
    let get = |k: &str| {
        v["results"][k]
            .as_f64()
            .ok_or_else(|| Error::InvalidParameter(format!("sweep report {}: missing results.{k}", path.display())))
    };
    Ok(SweepSummary {
        m: get("m")?,
        m_sup: get("M_sup")?,
        miller_time: get("miller_time")?,
    })
}

fn report(command: Command, config: &ExperimentConfig, results: Value, error: Option<&Error>) -> Value {
    json!({
        "subcommand": command.name(),
        "status": if error.is_some() { "error" } else { "ok" },
        "config_echo": config,
        "versions": {
            "torus_control": env!("CARGO_PKG_VERSION"),
            "report_format": 1,
        },
        "results": results,
        "error": error.map(|e| json!({ "kind": e.kind(), "message": e.to_string() })),
    })
}

fn write_artifacts(dir: &Path, name: &str, format: OutputFormat, report: &Value, csv: Option<&[u8]>) -> Result<()> {
    fs::create_dir_all(dir)?;
    if format.json() {
        io::write_json(io::create(&dir.join(format!("{name}.json")))?, report)?;
    }
    if let (true, Some(bytes)) = (format.csv(), csv) {
        fs::write(dir.join(format!("{name}.csv")), bytes)?;
    }
    Ok(())
}

/// Applies command-line overrides to a loaded configuration.
pub fn apply_overrides(mut config: ExperimentConfig, cli: &Cli) -> ExperimentConfig {
    if let Some(dir) = &cli.out {
        config.output.dir = dir.clone();
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(f) = cli.format {
        config.output.formats = f;
    }
    config
}

/// Full command-line entry point; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                ErrorKind::InvalidSubcommand => EXIT_UNKNOWN_SUBCOMMAND,
                _ => EXIT_VALIDATION,
            };
            let _ = e.print();
            return code;
        }
    };
    let Some(path) = cli.config.clone() else {
        eprintln!("error: --config PATH is required");
        return EXIT_VALIDATION;
    };
    let config = match ExperimentConfig::load(&path) {
        Ok(c) => apply_overrides(c, &cli),
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_VALIDATION;
        }
    };
    if let Err(e) = config.validate(cli.command) {
        eprintln!("error: {e}");
        return EXIT_VALIDATION;
    }
    let name = cli.command.name();
    let dir = config.output.dir.clone();
    match run(cli.command, &config) {
        Ok(out) => {
            let rep = report(cli.command, &config, out.results, None);
            match write_artifacts(&dir, name, config.output.formats, &rep, out.csv.as_deref()) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_NUMERICAL
                }
            }
        }
        Err(e) if e.is_validation() => {
            eprintln!("error: {e}");
            EXIT_VALIDATION
        }
        Err(e) => {
            eprintln!("error: {e}");
            let rep = report(cli.command, &config, Value::Null, Some(&e));
            if let Err(w) = write_artifacts(&dir, name, OutputFormat::Json, &rep, None) {
                eprintln!("error: {w}");
            }
            EXIT_NUMERICAL
        }
    }
}
