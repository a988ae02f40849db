//! Command-line entry point. Exit codes: 0 success, 1 validation, 2 solver, 3 I/O.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use ermrer_core::{solve_type1, solve_type2, DiscreteMeasure};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{ExpError, Result};
use crate::instance::generate_instance;
use crate::sweep::{emit_csv, render_json, run_sweep, summary};
use crate::verify::run_checks;

#[derive(Debug, Parser)]
#[command(name = "ermrer", about = "Relative-entropy regularized ERM experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve both problems over the λ grid and write the CSV and JSON reports.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_csv`.
        #[arg(long)]
        out_csv: Option<PathBuf>,
        /// Overrides `output_json`.
        #[arg(long)]
        out_json: Option<PathBuf>,
    },
    /// Print one solution's atoms and weights as JSON.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long = "type", value_parser = ["1", "2"])]
        kind: String,
    },
    /// Run the invariant suite; exit 0 iff every check passes.
    Verify {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Serialize)]
struct Atom<'a> {
    point: &'a [f64],
    weight: f64,
}

#[derive(Serialize)]
struct Solution<'a> {
    r#type: u8,
    lambda: f64,
    /// `K(−1/λ)` for Type-I, `K̄(λ)` for Type-II.
    constant: f64,
    atoms: Vec<Atom<'a>>,
}

fn atoms(m: &DiscreteMeasure) -> Vec<Atom<'_>> {
    m.iter().map(|(p, w)| Atom { point: p.coords(), weight: w }).collect()
}

fn output_path(flag: Option<PathBuf>, configured: &Option<String>, base: &Path) -> Option<PathBuf> {
    flag.or_else(|| configured.as_ref().map(|p| base.join(p)))
}

/// Runs a parsed command, writing reports to `out`. Returns the exit code on success.
pub fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    let stdout_err = |e| ExpError::io("<stdout>", e);
    match cmd {
        Command::Sweep { config, out_csv, out_json } => {
            let (cfg, base) = ExperimentConfig::load(&config)?;
            let inst = generate_instance(&cfg, &base)?;
            let records = run_sweep(&cfg, &inst);
            let json = render_json(&summary(&cfg, &inst, &records));
            match output_path(out_csv, &cfg.output_csv, &base) {
                Some(p) => emit_csv(&records, &p)?,
                None => out.write_all(crate::sweep::render_csv(&records).as_bytes()).map_err(stdout_err)?,
            }
            match output_path(out_json, &cfg.output_json, &base) {
                Some(p) => std::fs::write(&p, json).map_err(|e| ExpError::io(&p, e))?,
                None => out.write_all(json.as_bytes()).map_err(stdout_err)?,
            }
            Ok(0)
        }
        Command::Solve { config, lambda, kind } => {
            if !(lambda.is_finite() && lambda > 0.0) {
                return Err(ExpError::validation("lambda", format!("must be positive and finite, got {lambda}")));
            }
            let (cfg, base) = ExperimentConfig::load(&config)?;
            let inst = generate_instance(&cfg, &base)?;
            let (q, prof) = (&inst.reference, &inst.profile);
            let text = if kind == "1" {
                let s = solve_type1(q, prof, lambda)?;
                serde_json::to_string_pretty(&Solution {
                    r#type: 1,
                    lambda,
                    constant: s.log_partition,
                    atoms: atoms(&s.measure),
                })
            } else {
                let s = solve_type2(q, prof, lambda)?;
                serde_json::to_string_pretty(&Solution { r#type: 2, lambda, constant: s.k_bar, atoms: atoms(&s.measure) })
            }
            .expect("solution serializes");
            writeln!(out, "{text}").map_err(stdout_err)?;
            Ok(0)
        }
        Command::Verify { config } => {
            let (cfg, base) = ExperimentConfig::load(&config)?;
            let inst = generate_instance(&cfg, &base)?;
            let checks = run_checks(&cfg, &inst);
            for c in &checks {
                writeln!(out, "{c}").map_err(stdout_err)?;
            }
            Ok(if checks.iter().all(|c| c.passed) { 0 } else { 2 })
        }
    }
}

/// Parses `argv`, runs it, and maps failures to exit codes with a diagnostic on stderr.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(cli.command, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
