//! Driving a scan from a request and writing its artifacts.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::{load_config, to_toml, RunConfig, ScanRequest};
use crate::error::{Error, Result};
use crate::error_budget::{error_budget, ErrorBudget};
use crate::experiment::{validate, Preset, ValidatedSetup, FRAUNHOFER_WARNING_RATIO};
use crate::sorkin::{scan_positions, Normalization, SorkinScan};

/// Environment variable selecting the number of worker threads.
pub const WORKERS_ENV: &str = "SLITPATHS_WORKERS";

pub const CSV_HEADER: &str =
    "y_detector_m,intensity_normalized,epsilon_full,epsilon_linear,kappa_full,kappa_linear,point_valid";

#[derive(Debug, Clone, PartialEq)]
pub enum SetupSource {
    Preset(Preset),
    Config(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRequest {
    pub source: SetupSource,
    /// Overrides the configuration's `[scan]`.
    pub scan: Option<ScanRequest>,
    pub normalization: Option<Normalization>,
    pub points_per_cycle: Option<f64>,
    pub tolerance: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub disable_nonclassical: bool,
    pub no_inclination_factor: bool,
    pub include_z_factor: bool,
    /// Print the error budget.
    pub errors: bool,
}

impl RunRequest {
    pub fn new(source: SetupSource) -> Self {
        RunRequest {
            source,
            scan: None,
            normalization: None,
            points_per_cycle: None,
            tolerance: None,
            out: None,
            format: OutputFormat::Csv,
            disable_nonclassical: false,
            no_inclination_factor: false,
            include_z_factor: false,
            errors: false,
        }
    }
}

/// Process exit status for an error.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::Parse(_) => 3,
        Error::Config(_) | Error::Validation(_) => 4,
        Error::Io { .. } => 5,
        Error::Domain(_)
        | Error::Overflow(_)
        | Error::Convergence { .. }
        | Error::Budget { .. }
        | Error::DegenerateNormalization(_) => 6,
    }
}

/// Apply the request's source and overrides.
pub fn resolve(request: &RunRequest) -> Result<RunConfig> {
    let mut config = match &request.source {
        SetupSource::Preset(p) => RunConfig::new(p.setup()),
        SetupSource::Config(path) => load_config(path)?,
    };
    if let Some(scan) = request.scan {
        scan.validate()?;
        config.scan = Some(scan);
    }
    if let Some(n) = request.normalization {
        config.normalization = n;
    }
    if let Some(r) = request.points_per_cycle {
        config.quadrature.points_per_cycle = r;
    }
    if let Some(t) = request.tolerance {
        config.quadrature.rel_tolerance = t;
    }
    config.quadrature.validate()?;
    if request.disable_nonclassical {
        config.setup.include_nonclassical = false;
    }
    if request.no_inclination_factor {
        config.setup.apply_inclination_factor = false;
    }
    if request.include_z_factor {
        config.setup.include_z_factor = true;
    }
    Ok(config)
}

/// What a successful run produced.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub config: RunConfig,
    pub budget: ErrorBudget,
    pub scan: Option<SorkinScan>,
    pub written: Vec<PathBuf>,
}

#[derive(Serialize)]
struct Provenance {
    tool: &'static str,
    version: &'static str,
    started_unix_s: f64,
    wall_clock_s: f64,
    delta: f64,
    invalid_points: usize,
    warnings: Vec<String>,
}

/// Run a request, writing results to `request.out` (or `stdout`) and
/// human-readable reports to `stdout`.
pub fn run(request: &RunRequest, stdout: &mut dyn Write) -> Result<RunOutcome> {
    let started = SystemTime::now();
    let clock = Instant::now();
    let config = resolve(request)?;
    let setup = validate(config.setup.clone())?;
    let budget = error_budget(&setup, &config.material)?;
    let mut outcome = RunOutcome {
        config: config.clone(),
        budget,
        scan: None,
        written: Vec::new(),
    };

    if request.errors {
        write_error_table(&setup, &budget, stdout).map_err(stdout_error)?;
    }
    let Some(scan_request) = config.scan else {
        if request.errors {
            return Ok(outcome);
        }
        return Err(Error::Config("no scan requested: give --scan, --point or a [scan] table".into()));
    };

    let scan = scan_positions(&setup, &scan_request.positions(), config.normalization, &config.quadrature)?;
    let body = match request.format {
        OutputFormat::Csv => scan_csv(&scan),
        OutputFormat::Json => scan_json(&scan)?,
    };
    if let ScanRequest::Point(_) = scan_request {
        write_point_report(&scan, stdout).map_err(stdout_error)?;
    }
    match &request.out {
        Some(path) => {
            write_file(path, &body)?;
            outcome.written.push(path.clone());
            let provenance = Provenance {
                tool: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
                started_unix_s: started.duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0),
                wall_clock_s: clock.elapsed().as_secs_f64(),
                delta: scan.delta,
                invalid_points: scan.point_valid.iter().filter(|v| !**v).count(),
                warnings: setup.warnings().to_vec(),
            };
            let meta = to_toml(&config, Some(&budget), Some(&provenance))?;
            let meta_path = sidecar_path(path);
            write_file(&meta_path, &meta)?;
            outcome.written.push(meta_path);
        }
        None => {
            if !matches!(scan_request, ScanRequest::Point(_)) {
                stdout.write_all(body.as_bytes()).map_err(stdout_error)?;
            }
        }
    }
    for failure in &scan.metadata.failures {
        writeln!(stdout, "warning: point {} (y = {:e} m) invalid: {}", failure.index, failure.y, failure.message)
            .map_err(stdout_error)?;
    }
    outcome.scan = Some(scan);
    Ok(outcome)
}

/// Print the error budget of the request's setup.
pub fn report_errors(request: &RunRequest, stdout: &mut dyn Write) -> Result<ErrorBudget> {
    let config = resolve(request)?;
    let setup = validate(config.setup)?;
    let budget = error_budget(&setup, &config.material)?;
    write_error_table(&setup, &budget, stdout).map_err(stdout_error)?;
    Ok(budget)
}

fn stdout_error(e: std::io::Error) -> Error {
    Error::Io {
        path: "<stdout>".into(),
        source: e,
    }
}

fn write_error_table(setup: &ValidatedSetup, b: &ErrorBudget, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "error budget (relative error on kappa)")?;
    writeln!(out, "  metal transmission  {:.3e}", b.metal_transmission_rel)?;
    writeln!(out, "  stationary phase    {:.3e}", b.stationary_phase_rel)?;
    writeln!(out, "  fraunhofer          {:.3e}", b.fraunhofer_rel)?;
    writeln!(out, "  leading             {:.3e} ({})", b.kappa_rel_leading, b.leading())?;
    if b.fraunhofer_rel > FRAUNHOFER_WARNING_RATIO {
        writeln!(out, "warning: fraunhofer error {:.3} is large; the far-field expansion is questionable", b.fraunhofer_rel)?;
    }
    for w in setup.warnings() {
        writeln!(out, "warning: {w}")?;
    }
    Ok(())
}

fn write_point_report(scan: &SorkinScan, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "y_detector_m          {:.6e}", scan.y_values[0])?;
    writeln!(out, "kappa_full            {:.6e}", scan.kappa_full[0])?;
    writeln!(out, "kappa_linear          {:.6e}", scan.kappa_linear[0])?;
    writeln!(out, "epsilon_full          {:.6e}", scan.epsilon_full[0])?;
    writeln!(out, "delta                 {:.6e}", scan.delta_per_point.as_ref().map_or(scan.delta, |d| d[0]))?;
    writeln!(out, "intensity_normalized  {:.6e}", scan.intensity_normalized[0])?;
    writeln!(out, "point_valid           {}", scan.point_valid[0])
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// `<out>.meta.toml` next to the result file.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.toml");
    PathBuf::from(name)
}

fn number(v: f64) -> String {
    format!("{v:.16e}")
}

/// The scan as CSV: header row, then one line per detector position.
pub fn scan_csv(scan: &SorkinScan) -> String {
    let mut s = String::with_capacity(160 * (scan.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for i in 0..scan.len() {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            number(scan.y_values[i]),
            number(scan.intensity_normalized[i]),
            number(scan.epsilon_full[i]),
            number(scan.epsilon_linear[i]),
            number(scan.kappa_full[i]),
            number(scan.kappa_linear[i]),
            u8::from(scan.point_valid[i]),
        );
    }
    s
}

pub fn scan_json(scan: &SorkinScan) -> Result<String> {
    let mut s = serde_json::to_string_pretty(scan)
        .map_err(|e| Error::Config(format!("cannot serialise scan: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Size the global thread pool from [`WORKERS_ENV`], if set.
pub fn configure_workers() -> Result<()> {
    let Ok(value) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("{WORKERS_ENV} must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("cannot start {n} workers: {e}")))
}
