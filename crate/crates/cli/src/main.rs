use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dicke_cli::{presets, threads_from_env, CliError, Context, Mode, Overrides, ScenarioConfig};

/// Exact single-excitation dynamics of an inhomogeneously broadened spin
/// ensemble in a cavity.
#[derive(Debug, Parser)]
#[command(name = "dicke-bethe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Scenario file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Disorder seed, overriding the scenario file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Add dense-diagonalization cross-check columns.
    #[arg(long, global = true)]
    oracle: bool,
    /// Add large-L closed-form columns.
    #[arg(long, global = true)]
    asymptotic: bool,
    /// Also write a gnuplot script for the produced CSVs.
    #[arg(long, global = true)]
    gnuplot: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Roots, norms and photon weights of every eigenstate.
    Spectrum,
    /// Observable traces for the scenario's initial state.
    Evolve,
    /// Exact against large-L closed forms.
    Compare,
    /// Survival statistics over seeds and spin counts.
    Sweep,
    /// Run a bundled scenario (`list` prints the names).
    Preset { name: String },
}

fn execute(cli: Cli) -> Result<Vec<String>, CliError> {
    let ctx = Context {
        out: cli.out,
        gnuplot: cli.gnuplot,
        overrides: Overrides {
            seed: cli.seed,
            asymptotic: cli.asymptotic,
            oracle: cli.oracle,
        },
        threads: threads_from_env()?,
    };
    let load = || match &cli.config {
        Some(path) => ScenarioConfig::load(path),
        None => Err(CliError::config("--config <path> is required")),
    };
    let (mode, cfg) = match cli.command {
        Command::Spectrum => (Mode::Spectrum, load()?),
        Command::Evolve => (Mode::Evolve, load()?),
        Command::Compare => (Mode::Compare, load()?),
        Command::Sweep => (Mode::Sweep, load()?),
        Command::Preset { name } if name == "list" => {
            return Ok(presets::names().map(String::from).collect());
        }
        Command::Preset { name } => {
            let cfg = presets::load(&name)?;
            (cfg.mode(), cfg)
        }
    };
    let report = dicke_cli::run(mode, &cfg, &ctx)?;
    let mut lines = report.lines;
    lines.extend(report.files.iter().map(|f| format!("wrote {}", f.display())));
    Ok(lines)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(lines) => {
            for line in lines {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("dicke-bethe: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
