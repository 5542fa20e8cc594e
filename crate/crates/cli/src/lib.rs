//! Scenario runner behind the `dicke-bethe` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod gnuplot;
pub mod output;
pub mod presets;

pub use commands::{Context, Report};
pub use config::{Mode, Overrides, Scenario, ScenarioConfig};
pub use error::{CliError, Result};

/// `DICKE_THREADS`, if set: a positive worker count for sweeps.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var("DICKE_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::config(format!("DICKE_THREADS: {e}"))),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::config(format!(
                "DICKE_THREADS must be a positive integer, got {v:?}"
            ))),
        },
    }
}

/// Runs `mode` on a parsed scenario.
pub fn run(mode: Mode, cfg: &ScenarioConfig, ctx: &Context) -> Result<Report> {
    match mode {
        Mode::Sweep => commands::sweep(cfg, ctx),
        Mode::Spectrum => commands::spectrum(&cfg.resolve(&ctx.overrides)?, ctx),
        Mode::Evolve => commands::evolve(&cfg.resolve(&ctx.overrides)?, ctx),
        Mode::Compare => commands::compare(&cfg.resolve(&ctx.overrides)?, ctx),
    }
}
