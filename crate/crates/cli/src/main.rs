mod config;
mod experiments;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{resolve, Config, ConfigError};

#[derive(Parser)]
#[command(
    name = "wfgame",
    version,
    about = "Evolutionary games on voting kernels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON configuration.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides `root_seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides `replicas`.
        #[arg(long)]
        replicas: Option<usize>,
    },
}

enum Failure {
    Config(ConfigError),
    Runtime(String),
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn write_outputs(
    out: &Path,
    header: serde_json::Value,
    outcome: &experiments::Outcome,
) -> std::io::Result<()> {
    std::fs::create_dir_all(out)?;
    let mut csv = header.to_string();
    csv.push('\n');
    csv.push_str(&outcome.columns.join(","));
    csv.push('\n');
    for row in &outcome.rows {
        let fields: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
        let _ = writeln!(csv, "{}", fields.join(","));
    }
    std::fs::write(out.join("results.csv"), csv)?;

    let mut summary = header;
    summary["results"] = outcome.results.clone();
    let mut text = serde_json::to_string_pretty(&summary).map_err(std::io::Error::other)?;
    text.push('\n');
    std::fs::write(out.join("summary.json"), text)
}

fn run(
    config: &Path,
    out: &Path,
    seed: Option<u64>,
    replicas: Option<usize>,
) -> Result<(), Failure> {
    let mut cfg = Config::load(config).map_err(Failure::Config)?;
    if let Some(s) = seed {
        cfg.root_seed = s;
    }
    if let Some(r) = replicas {
        cfg.replicas = r;
    }
    let resolved = resolve(cfg).map_err(Failure::Config)?;
    let outcome = experiments::run(&resolved).map_err(|e| Failure::Runtime(e.to_string()))?;
    let mut header = resolved.header();
    header["experiment"] = serde_json::json!(resolved.config.experiment.name());
    write_outputs(out, header, &outcome)
        .map_err(|e| Failure::Runtime(format!("writing {}: {e}", out.display())))?;
    println!("{}", outcome.line);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run {
        config,
        out,
        seed,
        replicas,
    } = cli.command;
    match run(&config, &out, seed, replicas) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("wfgame: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("wfgame: runtime error: {e}");
            ExitCode::from(3)
        }
    }
}
