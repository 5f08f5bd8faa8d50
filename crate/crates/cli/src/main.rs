use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stripack_cli::commands::{self, CliError, SolveArgs};

/// Strip packing: solve, check and draw packings of rectangles into a strip
/// of fixed width.
///
/// Exit codes: 0 ok, 1 invalid packing, 2 unreadable input or bad arguments,
/// 3 search budget exhausted.
#[derive(Parser)]
#[command(name = "stripack", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Pack an instance; prints the report, then the packing unless --out is given.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value = "1/4")]
        eps: String,
        /// practical or faithful
        #[arg(long, default_value = "practical")]
        mode: String,
        /// Packing whose height is taken as the optimum and whose layout fixes the structure.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Keep the structured result even when NFDH is lower.
        #[arg(long)]
        no_fallback: bool,
    },
    /// Optimal height and a witness packing by exhaustive search.
    Exact {
        instance: PathBuf,
        /// Search nodes before giving up.
        #[arg(long, default_value_t = 20_000_000)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a packing against its instance.
    Validate { instance: PathBuf, packing: PathBuf },
    /// Write a random instance.
    Generate {
        /// uniform, partition or tall-heavy
        #[arg(long, default_value = "uniform")]
        kind: String,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long = "W", default_value_t = 20)]
        width: i64,
        /// Defaults to $STRIPACK_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a packing as SVG.
    Render {
        instance: PathBuf,
        packing: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the solver over every `*.txt` instance of a directory.
    Bench {
        dir: PathBuf,
        /// Comma-separated list.
        #[arg(long, default_value = "1/4")]
        eps: String,
        /// Oracle search nodes per instance.
        #[arg(long, default_value_t = 2_000_000)]
        budget: u64,
    },
}

fn default_seed() -> Result<u64, CliError> {
    match std::env::var("STRIPACK_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| CliError::Usage(format!("STRIPACK_SEED `{s}` is not a number"))),
        Err(_) => Ok(0),
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.cmd {
        Cmd::Solve { instance, eps, mode, witness, out, no_fallback } => commands::cmd_solve(&SolveArgs {
            instance: &instance,
            eps: &eps,
            mode: &mode,
            witness: witness.as_deref(),
            out: out.as_deref(),
            no_fallback,
        }),
        Cmd::Exact { instance, budget, out } => commands::cmd_exact(&instance, budget, out.as_deref()),
        Cmd::Validate { instance, packing } => commands::cmd_validate(&instance, &packing),
        Cmd::Generate { kind, n, width, seed, out } => {
            let seed = match seed {
                Some(s) => s,
                None => default_seed()?,
            };
            commands::cmd_generate(&kind, n, width, seed, out.as_deref())
        }
        Cmd::Render { instance, packing, out } => commands::cmd_render(&instance, &packing, &out),
        Cmd::Bench { dir, eps, budget } => commands::cmd_bench(&dir, &eps, budget),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
