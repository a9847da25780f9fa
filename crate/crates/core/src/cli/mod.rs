//! Experiment runner behind the `fermiball` binary.
//!
//! `run` writes `<prefix>.csv` and a `<prefix>.json` sidecar. Exit codes:
//! 2 for configuration errors, 3 when a quantity that must be finite is not
//! (or a quadrature fails), 4 for IO errors.

pub mod config;
mod experiments;
pub mod output;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::convergence::kernel_prefactor;
use crate::domains::fermi_radius;
use crate::specfun::chb_ratio_report;

pub use config::{Experiment, ExperimentConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Config(String),
    Numeric(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub csv_path: PathBuf,
    pub json_path: PathBuf,
    pub rows: usize,
}

/// Reads and runs a config file. `output` overrides the configured prefix.
pub fn run_file(path: &Path, output: Option<&Path>) -> Result<RunSummary, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let cfg = ExperimentConfig::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let prefix = match output {
        Some(p) => p.to_path_buf(),
        None => cfg.output_prefix(path.parent().unwrap_or(Path::new("."))),
    };
    run(&cfg, &prefix)
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// Constant checks recorded in every sidecar.
pub fn constant_reports() -> Result<Value, CliError> {
    let numeric = |e: crate::Error| CliError::Numeric(e.to_string());
    let chb = (1..=3)
        .map(|n| chb_ratio_report(n, 1.0).map_err(numeric))
        .collect::<Result<Vec<_>, _>>()?;
    let prefactor = kernel_prefactor().map_err(numeric)?;
    Ok(json!({"ball_transform_ratio": chb, "kernel_prefactor": prefactor}))
}

pub fn run(cfg: &ExperimentConfig, prefix: &Path) -> Result<RunSummary, CliError> {
    cfg.validate().map_err(|e| CliError::Config(e.0))?;
    let basis = cfg.basis_family().map_err(|e| CliError::Config(e.0))?;
    let symbol = cfg.symbol_spec().map_err(|e| CliError::Config(e.0))?;
    let ctx = experiments::Context { cfg, basis, symbol };
    let (table, details) = experiments::run(&ctx)?;
    let csv = table
        .to_csv()
        .map_err(|e| CliError::Numeric(format!("{}: {e}", cfg.experiment)))?;

    let domain = ctx.basis.domain();
    let sidecar = json!({
        "version": VERSION,
        "experiment": cfg.experiment.name(),
        "config": cfg,
        "columns": table.header,
        "rows": table.rows.len(),
        "basis": {
            "name": ctx.basis.name(),
            "dim": ctx.basis.dim(),
            "kappa_f": fermi_radius(&domain).kappa_f,
            "density_height": domain.density_height(),
        },
        "symbol": ctx.symbol.name(),
        "details": details,
        "reports": constant_reports()?,
    });
    let mut json_bytes = serde_json::to_vec_pretty(&sidecar).map_err(|e| CliError::Numeric(e.to_string()))?;
    json_bytes.push(b'\n');

    let csv_path = with_extension(prefix, "csv");
    let json_path = with_extension(prefix, "json");
    let io = |p: &Path, e: std::io::Error| CliError::Io(format!("{}: {e}", p.display()));
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    }
    fs::write(&csv_path, csv).map_err(|e| io(&csv_path, e))?;
    fs::write(&json_path, json_bytes).map_err(|e| io(&json_path, e))?;
    Ok(RunSummary {
        csv_path,
        json_path,
        rows: table.rows.len(),
    })
}

pub fn list_experiments() -> String {
    Experiment::ALL
        .iter()
        .map(|e| format!("{:<10} {}\n", e.name(), e.summary()))
        .collect()
}
