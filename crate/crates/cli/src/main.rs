//! `evm`: closed-form and simulated EVM from scenario files.
//!
//! Exit status: 0 success, 1 I/O or numerical failure, 2 invalid input or
//! unsupported scenario, 3 Monte Carlo disagreement.

mod commands;
mod error;
mod figures;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Format;
use error::CliError;
use scenario::ScenarioFile;

#[derive(Parser)]
#[command(name = "evm", version, about = "EVM under kappa-mu shadowed fading with co-channel interference")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct McArgs {
    /// RNG seed; overrides mc.seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Fading blocks per point; overrides mc.blocks.
    #[arg(long)]
    blocks: Option<u64>,
    /// Worker threads; overrides mc.workers.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form EVM for every sweep point.
    Analytic {
        #[arg(long)]
        scenario: PathBuf,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Multiplies every analytic value (negative-control hook).
        #[arg(long, hide = true)]
        perturb_analytic: Option<f64>,
    },
    /// Closed form against Monte Carlo; exit 3 if any point falls outside
    /// max(1%, 3 stderr).
    Validate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, hide = true)]
        perturb_analytic: Option<f64>,
    },
    /// Figure dataset as figure<ID>.csv plus a figure<ID>.json manifest.
    Figure {
        /// Figure number, 1 to 6.
        id: u32,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Add simulated values to every point.
        #[arg(long)]
        mc: bool,
        /// Symbols per block for --mc.
        #[arg(long, default_value_t = 10_000)]
        block_length: u64,
        #[command(flatten)]
        mc_args: McArgs,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analytic {
            scenario,
            out,
            format,
            perturb_analytic,
        } => {
            let file = ScenarioFile::load(&scenario)?;
            let rows = commands::analytic_rows(&file, perturb_analytic)?;
            commands::write_rows(&rows, "analytic", &file, format, out.as_deref())
        }
        Command::Validate {
            scenario,
            out,
            format,
            mc,
            perturb_analytic,
        } => {
            let file = ScenarioFile::load(&scenario)?;
            let cfg = file.mc_config(mc.seed, mc.blocks, mc.workers)?;
            let rows = commands::validate_rows(&file, &cfg, perturb_analytic)?;
            commands::write_rows(&rows, "validate", &file, format, out.as_deref())?;
            let bad: Vec<String> = rows
                .iter()
                .filter(|r| !r.agrees())
                .map(|r| {
                    format!(
                        "sweep value {}: analytic {} vs mc {} (|diff| {} > band {})",
                        commands::fmt_opt(r.sweep_value),
                        r.analytic_evm,
                        commands::fmt_opt(r.mc_evm),
                        commands::fmt_opt(r.abs_diff),
                        commands::fmt_opt(r.band)
                    )
                })
                .collect();
            if bad.is_empty() {
                Ok(())
            } else {
                Err(CliError::Disagreement(format!(
                    "{} of {} points disagree:\n  {}",
                    bad.len(),
                    rows.len(),
                    bad.join("\n  ")
                )))
            }
        }
        Command::Figure {
            id,
            out,
            mc,
            block_length,
            mc_args,
        } => {
            let cfg = if mc {
                let mut cfg = evm_core::McConfig {
                    block_length,
                    num_blocks: 100_000,
                    ..Default::default()
                };
                if let Some(s) = mc_args.seed {
                    cfg.seed = s;
                }
                if let Some(b) = mc_args.blocks {
                    cfg.num_blocks = b;
                }
                if let Some(w) = mc_args.workers {
                    cfg.workers = w;
                }
                cfg.validate().map_err(|e| CliError::Validation(e.to_string()))?;
                Some(cfg)
            } else {
                None
            };
            let fig = figures::build(id, cfg.as_ref())?;
            figures::write(&fig, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
