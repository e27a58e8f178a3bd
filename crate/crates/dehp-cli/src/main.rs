//! `dehp` — drive the error-cancellation ansatz toolkit from the shell.
//!
//! Subcommands: verify, spectrum, multiplet, correlate, obc, solve.
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage/config error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(name = "dehp", version, about = "Exact MPS scar construction and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON run configuration; flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Model family: model1, model2, spin2_2d, xyz_dm_2d.
    #[arg(long)]
    model: Option<String>,
    /// Dot-path override into the config document (repeatable),
    /// e.g. --set lattice.n=8 --set params.a=[2.0,0.0].
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Seed for every random draw in the run.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_parser = ["json", "csv"])]
    format: Option<String>,
    /// Omit the timestamp so identical runs produce identical bytes.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the local algebra, node cancellation and global zero energy.
    Verify(Common),
    /// Dense spectrum: zero-space census and momentum sectors.
    Spectrum(Common),
    /// Series-expansion multiplet with formula cross-checks.
    Multiplet(Common),
    /// Transfer-matrix correlator scan (CSV).
    Correlate(Common),
    /// Open-chain scar with fine-tuned boundary fields.
    Obc(Common),
    /// Multistart least-squares search for new tensor pairs.
    Solve(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common) = match &cli.command {
        Command::Verify(c) => ("verify", c),
        Command::Spectrum(c) => ("spectrum", c),
        Command::Multiplet(c) => ("multiplet", c),
        Command::Correlate(c) => ("correlate", c),
        Command::Obc(c) => ("obc", c),
        Command::Solve(c) => ("solve", c),
    };
    match run(name, common) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}

fn run(name: &str, common: &Common) -> Result<bool, config::ConfigError> {
    let cfg = config::resolve(
        name,
        common.config.as_deref(),
        common.model.as_deref(),
        &common.sets,
        common.seed,
    )?;
    let (payload, pass) = match name {
        "verify" => commands::cmd_verify(&cfg)?,
        "spectrum" => commands::cmd_spectrum(&cfg)?,
        "multiplet" => commands::cmd_multiplet(&cfg)?,
        "correlate" => commands::cmd_correlate(&cfg)?,
        "obc" => commands::cmd_obc(&cfg)?,
        "solve" => commands::cmd_solve(&cfg)?,
        _ => unreachable!(),
    };

    let format = common
        .format
        .clone()
        .unwrap_or_else(|| if name == "correlate" { "csv".into() } else { "json".into() });
    let text = if format == "csv" {
        commands::to_csv(name, &payload).ok_or_else(|| {
            config::ConfigError(format!("command '{name}' has no CSV rendering"))
        })?
    } else {
        let mut report = json!({
            "command": name,
            "pass": pass,
            "seed": cfg.seed,
            "config": serde_json::to_value(&cfg).expect("config serializes"),
        });
        if !common.no_timestamp {
            let ts = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            report["timestamp_unix"] = json!(ts);
        }
        if let (Some(obj), Some(extra)) = (report.as_object_mut(), payload.as_object()) {
            for (k, v) in extra {
                obj.insert(k.clone(), v.clone());
            }
        }
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    };

    match &common.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| config::ConfigError(format!("writing {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(pass)
}
