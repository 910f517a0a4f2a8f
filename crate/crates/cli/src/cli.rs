//! Argument parsing and dispatch.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::commands::{
    cmd_count_placements, cmd_evaluate, cmd_optimize, cmd_rank, cmd_render, parse_weights,
    OptimizeOverrides,
};
use crate::config::load_config;
use crate::error::{read_file, CliError};
use crate::layout::load_layout;

#[derive(Debug, Parser)]
#[command(
    name = "kennelgrid",
    version,
    about = "Shelter cage layout optimization"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for good layouts and write ranking, best layout and convergence log.
    Optimize {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        iterations: Option<usize>,
        /// Output directory; overrides the config's `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the criteria of a layout as JSON.
    Evaluate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        layout: PathBuf,
    },
    /// Rank a CSV decision matrix (id column, then one column per criterion).
    Rank {
        #[arg(long)]
        matrix: PathBuf,
        /// Comma-separated signed weights; negative means lower is better.
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        /// Write the ranked CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the closed-form and exhaustive single-cage placement counts.
    CountPlacements {
        #[arg(long)]
        config: PathBuf,
    },
    /// Draw a layout as SVG.
    Render {
        #[arg(long)]
        layout: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        px_per_cell: Option<u32>,
        /// Overlay each cage's shortest path to an entrance.
        #[arg(long)]
        show_paths: bool,
        /// Write the SVG here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: &mut dyn Write, target: Option<&Path>, body: &str) -> Result<(), CliError> {
    match target {
        Some(path) => std::fs::write(path, body).map_err(|e| CliError::io(path, e)),
        None => out
            .write_all(body.as_bytes())
            .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

/// Executes one parsed command, writing its report to `out`.
pub fn run(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Optimize {
            config,
            seed,
            iterations,
            out: dir,
        } => {
            let cfg = load_config(&config)?;
            let outcome = cmd_optimize(
                &cfg,
                &OptimizeOverrides {
                    seed,
                    iterations,
                    out: dir,
                },
            )?;
            let log = outcome
                .evolution
                .logs
                .last()
                .expect("at least one generation");
            let body = format!(
                "best: {} (score {})\noutput: {}\n",
                log.best_id,
                log.best_closeness,
                outcome.out_dir.display()
            );
            emit(out, None, &body)
        }
        Command::Evaluate { config, layout } => {
            let cfg = load_config(&config)?;
            let criteria = cmd_evaluate(&cfg, &load_layout(&layout)?)?;
            let body = serde_json::to_string_pretty(&criteria).expect("criteria serialize") + "\n";
            emit(out, None, &body)
        }
        Command::Rank {
            matrix,
            weights,
            out: target,
        } => {
            let weights = parse_weights(&weights)?;
            let ranked = cmd_rank(&read_file(&matrix)?, &weights)?;
            emit(out, target.as_deref(), &ranked)
        }
        Command::CountPlacements { config } => {
            let cfg = load_config(&config)?;
            let count = cmd_count_placements(&cfg);
            emit(out, None, &count.report())?;
            if count.agree() {
                Ok(())
            } else {
                Err(CliError::Internal(
                    "closed-form and brute-force counts differ".into(),
                ))
            }
        }
        Command::Render {
            layout,
            config,
            px_per_cell,
            show_paths,
            out: target,
        } => {
            let mut cfg = load_config(&config)?;
            if let Some(px) = px_per_cell {
                cfg.render.px_per_cell = px;
            }
            cfg.render.show_paths |= show_paths;
            cfg.validate()?;
            let svg = cmd_render(&cfg, &load_layout(&layout)?)?;
            emit(out, target.as_deref(), &svg)
        }
    }
}
