//! `svq` - train, check, and inspect stochastic vector quantiser encoders.
//!
//! Subcommands:
//! - `train <config.toml>`: run a config-driven experiment, writing the
//!   objective history, recon snapshots (CSV + PGM waterfalls), the final
//!   model, and a rerunnable manifest.
//! - `gradcheck`: sweep the analytic gradients of a randomized chain
//!   against central finite differences.
//! - `gen-data <mode>`: emit the synthetic scene distribution as CSV,
//!   either enumerated exactly or sampled.
//! - `render <snapshots> <stage>`: rebuild PGM waterfalls from snapshots.
//! - `eval <model>`: report per-stage distortion terms, optionally with a
//!   Monte-Carlo identity check and code-structure diagnostics.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use svq_cli::{commands, CliError};

#[derive(Parser)]
#[command(
    name = "svq",
    version,
    about = "Stochastic vector quantiser experiments"
)]
struct Cli {
    /// Override the seed a subcommand would otherwise use.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override the output path (train: run directory; gen-data: CSV file,
    /// stdout if omitted; render: image directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a training experiment described by a TOML config.
    Train {
        /// Experiment config file.
        config: PathBuf,
    },
    /// Check analytic gradients against central finite differences on a
    /// randomized chain.
    Gradcheck {
        /// Input dimensionality of the first stage.
        #[arg(long, default_value_t = 6)]
        input_dim: usize,
        /// Per-stage model orders as `M:n` pairs, comma separated.
        #[arg(long, default_value = "4:3,3:2")]
        stages: String,
        /// Number of dataset items.
        #[arg(long, default_value_t = 5)]
        items: usize,
        /// Largest acceptable relative error.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        /// Minimum number of coordinates to sweep (all coordinates are
        /// swept when the chain is small enough).
        #[arg(long, default_value_t = 50)]
        coords: usize,
    },
    /// Write scene vectors as CSV.
    #[command(name = "gen-data")]
    GenData {
        /// Scene mode: `independent` or `correlated`.
        mode: String,
        /// Emit the exact enumerated distribution with a probability column.
        #[arg(long)]
        enumerate: bool,
        /// Emit this many sampled vectors instead (no probability column).
        #[arg(long)]
        count: Option<usize>,
    },
    /// Render snapshot CSVs into per-index and combined PGM waterfalls.
    Render {
        /// Directory containing `step_<k>_stage_<l>.csv` snapshots.
        snapshot_dir: PathBuf,
        /// Stage index to render (0-based).
        stage: usize,
    },
    /// Evaluate a saved model on its scene's exact distribution.
    Eval {
        /// Model file written by `train`.
        model: PathBuf,
        /// Monte-Carlo trials per dataset item for the distortion identity
        /// check.
        #[arg(long)]
        mc: Option<usize>,
        /// Print peak profiles and the separation-invariance score.
        #[arg(long)]
        diagnostics: bool,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Train { config } => commands::train::run(&config, cli.seed, cli.out),
        Command::Gradcheck {
            input_dim,
            stages,
            items,
            tolerance,
            coords,
        } => commands::gradcheck::run(
            input_dim,
            &stages,
            items,
            tolerance,
            coords,
            cli.seed.unwrap_or(0),
        ),
        Command::GenData {
            mode,
            enumerate,
            count,
        } => commands::gen_data::run(&mode, enumerate, count, cli.seed.unwrap_or(0), cli.out),
        Command::Render {
            snapshot_dir,
            stage,
        } => commands::render::run(&snapshot_dir, stage, cli.out),
        Command::Eval {
            model,
            mc,
            diagnostics,
        } => commands::eval::run(&model, mc, diagnostics, cli.seed.unwrap_or(0)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
