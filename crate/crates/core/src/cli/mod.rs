//! Command-line harness: configuration, persistence formats and the
//! `verify-ground-state`, `classify`, `simulate` and `batch` commands.
//!
//! Exit codes: 0 success, 1 bad arguments or input, 2 certificate tolerance
//! failure, 3 numerical failure (step-size floor without a blow-up prediction).

pub mod batch;
pub mod config;
pub mod series;
pub mod snapshot;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::diagnostics::{self, DichotomyVerdict, Evidence, Prediction};
use crate::dynamics::{self, Outcome, RunResult};
use crate::grid::RadialGrid;
use crate::ground_state::{self, GroundState};
use crate::{Error, Result};
use config::{GridSpec, InitSpec, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_TOLERANCE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Certificate tolerances for `verify-ground-state`.
pub const RESIDUAL_TOL: f64 = 1e-4;
pub const POHOZAEV_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "nls6", version, about = "Energy-critical quadratic Schrödinger system in six dimensions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify the closed-form ground state on a radial grid.
    VerifyGroundState {
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        kappa: f64,
        #[arg(long, default_value_t = 1 << 14)]
        n: usize,
        #[arg(long, default_value_t = 400.0)]
        rmax: f64,
    },
    /// Predict scatter or blow-up from the initial data alone.
    Classify {
        #[arg(long, conflicts_with = "init")]
        config: Option<PathBuf>,
        /// Initial data, currently `cW:<c>`.
        #[arg(long)]
        init: Option<String>,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        kappa: f64,
        #[arg(long, default_value_t = 1 << 13)]
        n: usize,
        #[arg(long, default_value_t = 400.0)]
        rmax: f64,
    },
    /// Run one configuration and write series, snapshots and a verdict.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Override the output directory of the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the amplitude family c·W in parallel and print a summary CSV.
    Batch {
        #[arg(long, default_value = "c=0.2:1.6:0.1")]
        sweep: String,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        kappa: f64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Base configuration; its init is replaced by each c·W.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write the summary here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Serialize)]
#[allow(non_snake_case)]
pub struct Certificate {
    pub kappa: f64,
    pub H_W: f64,
    pub E_W: f64,
    pub R_W: f64,
    pub C_GN: f64,
    pub res1: f64,
    pub res2: f64,
    pub pohozaev_dev: f64,
    pub pass: bool,
}

pub fn certificate(kappa: f64, n: usize, r_max: f64) -> Result<Certificate> {
    let gs = GroundState::closed_form(kappa, &RadialGrid::six_dim(n, r_max)?)?;
    let res = ground_state::elliptic_residual(&gs);
    let poh = ground_state::pohozaev_certificate(gs.pair());
    let pass = res.res1 < RESIDUAL_TOL && res.res2 < RESIDUAL_TOL && poh.deviation < POHOZAEV_TOL;
    Ok(Certificate {
        kappa,
        H_W: gs.h_w(),
        E_W: gs.e_w(),
        R_W: gs.r_w(),
        C_GN: gs.c_gn(),
        res1: res.res1,
        res2: res.res2,
        pohozaev_dev: poh.deviation,
        pass,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub prediction: Prediction,
    pub evidence: Evidence,
}

/// Classify the initial state of a configuration without simulating.
pub fn classify_config(cfg: &RunConfig) -> Result<Classification> {
    let (fp, _) = cfg.initial_state()?;
    let (prediction, evidence) = match config::grid_thresholds(fp.grid_arc(), fp.kappa()) {
        Some(thr) => diagnostics::classify(&fp, &thr),
        None => {
            let nan = f64::NAN;
            (
                Prediction::Outside("thresholds need a six-dimensional radial grid".into()),
                Evidence { e0: nan, h0: nan, e_w: nan, h_w: nan },
            )
        }
    };
    Ok(Classification { prediction, evidence })
}

/// A finished run with its verdict.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub run: RunResult,
    pub verdict: DichotomyVerdict,
}

impl Simulation {
    /// Step-size floor reached without a blow-up prediction.
    pub fn numerical_failure(&self) -> bool {
        matches!(self.run.outcome, Outcome::DtFloor { .. }) && self.verdict.prediction != Prediction::BlowUp
    }
}

pub fn simulate(cfg: &RunConfig, run_id: Option<String>) -> Result<Simulation> {
    let (fp, t0) = cfg.initial_state()?;
    let class = classify_config(cfg)?;
    let run = dynamics::evolve_from(&fp, t0, &cfg.integrator, &cfg.diagnostics)?;
    let mut verdict = diagnostics::confirm(&run, class.prediction, class.evidence);
    verdict.run_id = run_id;
    Ok(Simulation { run, verdict })
}

/// Write `series.csv`, `snapshots/` and `verdict.json` under `dir`.
pub fn write_outputs(sim: &Simulation, cfg: &RunConfig, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let d = sim.run.final_state.grid().d();
    if cfg.outputs.csv {
        series::write_csv(&sim.run.series, d, io::BufWriter::new(fs::File::create(dir.join("series.csv"))?))?;
    }
    if cfg.outputs.snapshots {
        let snap_dir = dir.join("snapshots");
        fs::create_dir_all(&snap_dir)?;
        for (k, s) in sim.run.snapshots.iter().enumerate() {
            snapshot::write(&snap_dir.join(format!("snap_{k:05}.bin")), s.t, &s.pair)?;
        }
        snapshot::write(&snap_dir.join("final.bin"), sim.run.t_final, &sim.run.final_state)?;
    }
    fs::write(dir.join("verdict.json"), serde_json::to_string_pretty(&sim.verdict)?)?;
    Ok(())
}

fn parse_init(init: &str) -> Result<f64> {
    let bad = || Error::InvalidParameter(format!("init must look like cW:<c>, got {init:?}"));
    let c = init.strip_prefix("cW:").ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?;
    if !(c.is_finite() && c >= 0.0) {
        return Err(bad());
    }
    Ok(c)
}

fn jobs_from_env(jobs: usize) -> usize {
    std::env::var("NLS6_THREADS").ok().and_then(|s| s.trim().parse().ok()).filter(|&j| j > 0).unwrap_or(jobs)
}

fn print_json(value: &impl Serialize, out: &mut impl Write) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn execute(cmd: Command, out: &mut impl Write) -> Result<i32> {
    match cmd {
        Command::VerifyGroundState { kappa, n, rmax } => {
            let cert = certificate(kappa, n, rmax)?;
            print_json(&cert, out)?;
            Ok(if cert.pass { EXIT_OK } else { EXIT_TOLERANCE })
        }
        Command::Classify { config, init, kappa, n, rmax } => {
            let cfg = match (config, init) {
                (Some(path), _) => RunConfig::load(&path)?,
                (None, Some(init)) => {
                    let mut cfg = config::sweep_base(kappa, parse_init(&init)?);
                    cfg.grid = GridSpec::Radial { d: 6, n, r_max: rmax };
                    cfg.validate()?;
                    cfg
                }
                (None, None) => return Err(Error::InvalidParameter("classify needs --config or --init".into())),
            };
            print_json(&classify_config(&cfg)?, out)?;
            Ok(EXIT_OK)
        }
        Command::Simulate { config, out: dir } => {
            let cfg = RunConfig::load(&config)?;
            let run_id = config.file_stem().map(|s| s.to_string_lossy().into_owned());
            let sim = simulate(&cfg, run_id)?;
            let dir = dir.unwrap_or_else(|| cfg.outputs.dir.clone());
            write_outputs(&sim, &cfg, &dir)?;
            print_json(&sim.verdict, out)?;
            Ok(if sim.numerical_failure() { EXIT_NUMERICAL } else { EXIT_OK })
        }
        Command::Batch { sweep, kappa, jobs, config, output } => {
            let cs = batch::Sweep::parse(&sweep)?.values();
            let base = match config {
                Some(path) => {
                    let mut cfg = RunConfig::load(&path)?;
                    cfg.kappa = kappa;
                    cfg.init = InitSpec::GroundMultiple { c: 1.0 };
                    cfg.validate()?;
                    cfg
                }
                None => {
                    let cfg = config::sweep_base(kappa, 1.0);
                    cfg.validate()?;
                    cfg
                }
            };
            let rows = batch::run_batch(&base, &cs, jobs_from_env(jobs))?;
            match output {
                Some(path) => batch::write_summary(&rows, fs::File::create(path)?)?,
                None => batch::write_summary(&rows, &mut *out)?,
            }
            Ok(EXIT_OK)
        }
    }
}

/// Parse `args` (including the program name), run the command and return the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Entry point of the `nls6` binary.
pub fn main_entry() -> std::process::ExitCode {
    let code = run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::ExitCode::from(code as u8)
}
