//! Command-line front end: `lmg <experiment> --config <path>
//! [--set key=value ...] --out <path>`.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric failure,
//! 4 I/O failure. Output is a single CSV file with `#`-prefixed header
//! and footer lines; warnings embedded in the output are mirrored to
//! stderr.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::Parser;
use lmg::experiment::{exit_code_for, run_experiment, Config, Experiment};

#[derive(Parser)]
#[command(
    name = "lmg",
    version,
    about = "Dissipative LMG model experiments: exact Lindblad dynamics, \
             semiclassical flow, slow-flow dissipation law, thermalization \
             and spectral-gap scans",
    after_help = "Experiments: figure1, figure2, gap-scan, slowflow, \
                  classical, kernels, stationarity.\nThe config file holds \
                  one 'key = value' per line; --set overrides it."
)]
struct Cli {
    /// Experiment name (see the list below)
    experiment: String,

    /// Flat key = value configuration file
    #[arg(long, value_name = "PATH")]
    config: PathBuf,

    /// Override one config key (repeatable, wins over the file)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Output CSV path (wins over the config key 'out')
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn fail(code: u8, message: &str) -> ExitCode {
    eprintln!("lmg: {message}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let experiment = match Experiment::from_str(&cli.experiment) {
        Ok(e) => e,
        Err(e) => return fail(2, &e.to_string()),
    };

    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            return fail(4, &format!("cannot read config '{}': {e}", cli.config.display()));
        }
    };
    let mut cfg = match Config::parse(&text) {
        Ok(c) => c,
        Err(e) => return fail(2, &e.to_string()),
    };
    for item in &cli.set {
        let Some((key, value)) = item.split_once('=') else {
            return fail(2, &format!("--set '{item}': expected KEY=VALUE"));
        };
        if let Err(e) = cfg.set(key.trim(), value) {
            return fail(2, &e.to_string());
        }
    }

    // Output plumbing: the --out flag wins over the config key.
    let out_path: PathBuf = match (&cli.out, cfg.get_str("out")) {
        (Some(p), _) => p.clone(),
        (None, Some(p)) => PathBuf::from(p),
        (None, None) => return fail(2, "no output path: pass --out or set the 'out' key"),
    };
    if let Some(format) = cfg.get_str("format") {
        if format != "csv" {
            return fail(2, &format!("key 'format': only 'csv' is supported, got '{format}'"));
        }
    }

    let table = match run_experiment(experiment, &mut cfg) {
        Ok(t) => t,
        Err(e) => return fail(exit_code_for(&e) as u8, &e.to_string()),
    };
    for note in table.notes() {
        eprintln!("lmg: {note}");
    }

    if let Some(parent) = out_path.parent() {
        if !parent.as_os_str().is_empty() && !parent.exists() {
            return fail(4, &format!("output directory '{}' does not exist", parent.display()));
        }
    }
    match std::fs::write(&out_path, table.to_csv()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(4, &format!("cannot write '{}': {e}", out_path.display())),
    }
}
