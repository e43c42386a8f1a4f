//! Batch front end: threshold and critical-efficiency series over a range of
//! dimensions, MPS export and the oracle cross-checks.

pub mod phases;

use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use bellnoise::{
    bisect_critical_efficiency, build_threshold_lp, export_mps, prediction_tables,
    scan_critical_efficiency, solve_threshold, standard_settings, verify_suite, Dimension,
    PhaseSettings,
};
use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use phases::{format_phases, load_phase_file, parse_phases, PhaseFileError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Threshold,
    EfficiencyScan,
    EfficiencyBisect,
    ExportMps,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "bellnoise",
    version,
    about = "Local-realism thresholds for entangled quNits behind Bell multiports"
)]
pub struct Args {
    #[arg(long, value_enum, default_value = "threshold")]
    pub mode: Mode,
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    /// Defaults to `--n-min`.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Efficiency decrement for the downward scan.
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    /// Bisection tolerance on the critical efficiency.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file (directory for export-mps); stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Custom settings instead of the built-in phases; fixes n to the file's length.
    #[arg(long)]
    pub phases: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, default_value_t = bellnoise::DEFAULT_MAX_DIMENSION)]
    pub max_n_ceiling: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub n_min: usize,
    pub n_max: usize,
    pub step: f64,
    pub tol: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub phases: Option<PhaseSettings<f64>>,
    pub jobs: usize,
    pub max_n_ceiling: usize,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Phases(#[from] PhaseFileError),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{failed} of {total} runs failed")]
    Solver { failed: usize, total: usize },
    #[error("verification failed")]
    Verification,
}

impl CliError {
    /// 2 for bad input, 1 for failures during the run.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Phases(_) => 2,
            CliError::Io { .. } | CliError::Solver { .. } | CliError::Verification => 1,
        }
    }
}

fn usage(msg: impl fmt::Display) -> CliError {
    CliError::Usage(msg.to_string())
}

impl RunConfig {
    pub fn from_args(args: Args) -> Result<Self, CliError> {
        let phases = args.phases.as_deref().map(load_phase_file).transpose()?;
        let (n_min, n_max) = match &phases {
            Some(p) => {
                let explicit_max = args.n_max.unwrap_or(p.n());
                if !(args.n_min..=explicit_max).contains(&p.n()) {
                    return Err(usage(format!(
                        "phase file has n={}, outside --n-min {} / --n-max {}",
                        p.n(),
                        args.n_min,
                        explicit_max
                    )));
                }
                (p.n(), p.n())
            }
            None => (args.n_min, args.n_max.unwrap_or(args.n_min)),
        };
        let jobs = args
            .jobs
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        let config = RunConfig {
            mode: args.mode,
            n_min,
            n_max,
            step: args.step,
            tol: args.tol,
            format: args.format,
            out: args.out,
            phases,
            jobs,
            max_n_ceiling: args.max_n_ceiling,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n_min < 2 {
            return Err(usage(format!(
                "--n-min must be at least 2, got {}",
                self.n_min
            )));
        }
        if self.n_min > self.n_max {
            return Err(usage(format!(
                "--n-min {} exceeds --n-max {}",
                self.n_min, self.n_max
            )));
        }
        if self.n_max > self.max_n_ceiling {
            return Err(usage(format!(
                "--n-max {} exceeds the ceiling {} (raise --max-n-ceiling)",
                self.n_max, self.max_n_ceiling
            )));
        }
        if !(self.step > 0.0 && self.step < 1.0) {
            return Err(usage(format!(
                "--step must lie in (0, 1), got {}",
                self.step
            )));
        }
        if !(self.tol > 0.0) {
            return Err(usage(format!("--tol must be positive, got {}", self.tol)));
        }
        if self.jobs == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        Ok(())
    }

    fn settings(&self, n: usize) -> Result<PhaseSettings<f64>, CliError> {
        match &self.phases {
            Some(p) => Ok(p.clone()),
            None => Ok(standard_settings(
                Dimension::with_ceiling(n, self.max_n_ceiling).map_err(usage)?,
            )),
        }
    }
}

/// One output line; `error` is reported on stderr, never serialized.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub n: usize,
    pub f_threshold: Option<f64>,
    pub v_crit: Option<f64>,
    pub eta_critical: Option<f64>,
    pub iterations: Option<usize>,
    pub wall_ms: f64,
    #[serde(skip)]
    pub error: Option<String>,
}

pub const CSV_HEADER: &str = "n,f_threshold,v_crit,eta_critical,iterations,wall_ms";

fn compute_row(config: &RunConfig, n: usize) -> ResultRow {
    let started = Instant::now();
    let mut row = ResultRow {
        n,
        f_threshold: None,
        v_crit: None,
        eta_critical: None,
        iterations: None,
        wall_ms: 0.0,
        error: None,
    };
    let outcome = config
        .settings(n)
        .map_err(|e| e.to_string())
        .and_then(|settings| {
            match config.mode {
                Mode::Threshold => solve_threshold(&settings).map(|r| {
                    row.v_crit = Some(r.v_crit);
                    row.iterations = Some(r.stats.iterations);
                }),
                Mode::EfficiencyScan | Mode::EfficiencyBisect => {
                    let result = if config.mode == Mode::EfficiencyScan {
                        scan_critical_efficiency(&settings, config.step)
                    } else {
                        bisect_critical_efficiency(&settings, config.tol)
                    };
                    result.map(|r| {
                        row.v_crit = r.ideal_v_crit();
                        row.eta_critical = Some(r.eta_critical);
                        row.iterations = Some(r.total_iterations());
                    })
                }
                Mode::ExportMps | Mode::Verify => unreachable!("not a row mode"),
            }
            .map_err(|e| e.to_string())
        });
    row.f_threshold = row.v_crit.map(|v| 1.0 - v);
    row.error = outcome.err();
    row.wall_ms = (started.elapsed().as_secs_f64() * 1e6).round() / 1e3;
    row
}

/// Rows for every `n` in range, in ascending `n` whatever the completion order.
pub fn compute_rows(config: &RunConfig) -> Result<Vec<ResultRow>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| usage(format!("cannot start {} workers: {e}", config.jobs)))?;
    Ok(pool.install(|| {
        (config.n_min..=config.n_max)
            .into_par_iter()
            .map(|n| compute_row(config, n))
            .collect()
    }))
}

pub fn write_rows(rows: &[ResultRow], format: Format, mut out: impl Write) -> io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            if rows.is_empty() {
                w.write_record(CSV_HEADER.split(','))?;
            }
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn emit(
    config: &RunConfig,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), CliError> {
    match &config.out {
        Some(path) => {
            let mut file = io::BufWriter::new(std::fs::File::create(path).map_err(io_error(path))?);
            body(&mut file)
                .and_then(|_| file.flush())
                .map_err(io_error(path))
        }
        None => body(&mut io::stdout().lock()).map_err(io_error(Path::new("<stdout>"))),
    }
}

/// Writes one `bell_n{n}.mps` per dimension and returns the paths.
pub fn export_programs(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let dir = config.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(io_error(&dir))?;
    let mut written = Vec::new();
    for n in config.n_min..=config.n_max {
        let tables = prediction_tables(&config.settings(n)?).map_err(usage)?;
        let name = format!("bell_n{n}");
        let path = dir.join(format!("{name}.mps"));
        std::fs::write(&path, export_mps(&build_threshold_lp(&tables), &name))
            .map_err(io_error(&path))?;
        written.push(path);
    }
    Ok(written)
}

pub fn execute(config: &RunConfig) -> Result<(), CliError> {
    match config.mode {
        Mode::Threshold | Mode::EfficiencyScan | Mode::EfficiencyBisect => {
            let rows = compute_rows(config)?;
            emit(config, |w| write_rows(&rows, config.format, w))?;
            let failed: Vec<&ResultRow> = rows.iter().filter(|r| r.error.is_some()).collect();
            for row in &failed {
                eprintln!("n={}: {}", row.n, row.error.as_deref().unwrap_or_default());
            }
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Solver {
                    failed: failed.len(),
                    total: rows.len(),
                })
            }
        }
        Mode::ExportMps => {
            for path in export_programs(config)? {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
        Mode::Verify => {
            if config.phases.is_some() {
                return Err(usage("verify runs on the built-in settings; drop --phases"));
            }
            let report = verify_suite(config.n_min, config.n_max);
            emit(config, |w| {
                for c in &report.checks {
                    writeln!(
                        w,
                        "{} {}: {}",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.name,
                        c.detail
                    )?;
                }
                Ok(())
            })?;
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Verification)
            }
        }
    }
}
