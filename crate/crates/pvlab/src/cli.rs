//! `pvlab` command line.
//!
//! Exit codes: 0 on success, 1 when a run or a validation check fails,
//! 2 on configuration and usage errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pvlab_core::limits::report_constants;
use pvlab_core::simulator::simulate;
use pvlab_core::variations::variation;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::harness::{estimate_holder, run_convergence};
use crate::io;
use crate::validate::{run_suite, ConstantsTable};

#[derive(Debug, Parser)]
#[command(name = "pvlab", version = env!("PVLAB_VERSION"), about = "Power variations of fractional stochastic heat equations")]
pub struct Cli {
    /// JSON experiment configuration (defaults apply when absent)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed, overriding the configuration
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory
    #[arg(long, global = true, default_value = "pvlab-out")]
    pub out: PathBuf,
    /// Worker threads (falls back to SPDE_PV_THREADS, then all cores)
    #[arg(long, global = true, env = "SPDE_PV_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the limit constants of the configured (r, γ, D)
    Constants,
    /// Simulate one path at the first mesh of the grid and store it
    Simulate,
    /// Compute the configured variations on one path at the first mesh
    Variation,
    /// Monte Carlo convergence table across the mesh grid
    Converge,
    /// Hölder exponent regression (needs a "holder" section)
    Holder,
    /// Run the oracle suite and check the limit constants against a table
    Validate {
        /// JSON constants table replacing the built-in one
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::from_path(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn out_dir(cli: &Cli) -> Result<&Path> {
    std::fs::create_dir_all(&cli.out).map_err(|e| HarnessError::io(&cli.out, e))?;
    Ok(&cli.out)
}

/// Runs a parsed command and returns its exit code.
pub fn run(cli: &Cli) -> Result<u8> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(HarnessError::Config("--threads must be at least 1".into()));
        }
        // a pool built earlier in the process stays in place
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    if let Command::Validate { table } = &cli.command {
        return validate(table.as_deref());
    }
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::Constants => {
            let report = report_constants(&cfg.params(cfg.r)?, &cfg.orders)?;
            let path = out_dir(cli)?.join(format!("{}_constants.json", cfg.name));
            io::write_json(&path, &report)?;
            io::write_sidecar(&path, &cfg, serde_json::Value::Null)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
        Command::Simulate => {
            let sim = cfg.sim_config(first_delta(&cfg)?)?;
            let path = simulate(&sim)?;
            let dir = out_dir(cli)?;
            let bin = dir.join(format!("{}_path.bin", cfg.name));
            io::write_path(&bin, &path)?;
            let details = json!({ "rows": path.steps() + 1, "cols": path.truncation(), "delta": sim.delta });
            io::write_sidecar(&bin, &cfg, details)?;
            let csv = dir.join(format!("{}_norms.csv", cfg.name));
            io::write_norm_series(&csv, &path, cfg.r)?;
            io::write_sidecar(&csv, &cfg, json!({ "r": cfg.r }))?;
            println!("wrote {} and {}", bin.display(), csv.display());
        }
        Command::Variation => {
            let delta = first_delta(&cfg)?;
            let path = simulate(&cfg.sim_config(delta)?)?;
            let dir = out_dir(cli)?;
            for (i, (req, vc)) in cfg.requests().iter().zip(&cfg.variations).enumerate() {
                let series = variation(&path, &req.request(&cfg.params(req.r)?, delta)?)?;
                let csv = dir.join(format!("{}_variation{i}.csv", cfg.name));
                io::write_series(&csv, &series)?;
                io::write_sidecar(&csv, &cfg, json!({ "request": vc.label(), "delta": delta }))?;
                println!("{}: V(T) = {}", vc.label(), series.last().unwrap_or(0.0));
            }
        }
        Command::Converge => {
            let spec = cfg.experiment(Some(cli.out.clone()))?;
            let table = run_convergence(&spec)?;
            let dir = out_dir(cli)?;
            let csv = dir.join(format!("{}_convergence.csv", cfg.name));
            io::write_convergence_csv(&csv, &table)?;
            io::write_sidecar(&csv, &cfg, json!({ "truncation": table.truncation }))?;
            let summary = dir.join(format!("{}_convergence.json", cfg.name));
            io::write_json(&summary, &table)?;
            io::write_sidecar(&summary, &cfg, serde_json::Value::Null)?;
            for r in &table.rows {
                println!(
                    "{:<24} Δ={:<12e} V(T)={:.6} ± {:.6}  target={:.6}  |err|={:.6}  sup={:.6}",
                    r.request, r.delta, r.mean_v_at_t, r.std_error, r.theoretical_limit, r.abs_error, r.sup_error_over_grid
                );
            }
        }
        Command::Holder => {
            let est = estimate_holder(&cfg.holder_spec()?)?;
            let path = out_dir(cli)?.join(format!("{}_holder.json", cfg.name));
            io::write_json(&path, &est)?;
            io::write_sidecar(&path, &cfg, serde_json::Value::Null)?;
            println!(
                "slope {:.4} (95% CI [{:.4}, {:.4}]), theory {:.4}",
                est.slope, est.ci_low, est.ci_high, est.theoretical_alpha
            );
        }
        Command::Validate { .. } => unreachable!("handled above"),
    }
    Ok(0)
}

fn first_delta(cfg: &ExperimentConfig) -> Result<f64> {
    cfg.delta_grid.values().first().copied().ok_or_else(|| HarnessError::Config("delta grid is empty".into()))
}

fn validate(table: Option<&Path>) -> Result<u8> {
    let table = match table {
        Some(p) => ConstantsTable::from_path(p)?,
        None => ConstantsTable::builtin(),
    };
    let results = run_suite(&table);
    let mut ok = true;
    for r in &results {
        println!("[{}] {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
        ok &= r.passed;
    }
    Ok(if ok { 0 } else { 1 })
}
