use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod cmd;
mod config;

#[derive(Parser)]
#[command(name = "maxcard", version, about = "Communication protocols for cardinality-constrained submodular maximization")]
struct Cli {
    /// Worker threads for instance-level parallelism.
    #[arg(long, global = true, env = "MAXCARD_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write seeded instances as JSON files.
    Gen(cmd::gen::GenArgs),
    /// Run protocols on instances and report values against the optimum.
    Run(cmd::run::RunArgs),
    /// Decide INDEX or CHAIN through a Max-Card-k protocol.
    Reduce(cmd::reduce::ReduceArgs),
    /// Stress the deletion-robust wrapper.
    Robust(cmd::robust::RobustArgs),
    /// Certify the optimum of the 0.514 program.
    VerifyNlp(cmd::verify::NlpArgs),
    /// Check the hard-instance weights and family properties.
    VerifyHardness(cmd::verify::HardnessArgs),
}

/// Exit status when a check ran but failed.
const CHECK_FAILED: u8 = 1;
/// Exit status for bad input or usage.
const USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot size the worker pool: {e}");
            return ExitCode::from(USAGE);
        }
    }
    let outcome = match cli.command {
        Command::Gen(a) => cmd::gen::run(a),
        Command::Run(a) => cmd::run::run(a),
        Command::Reduce(a) => cmd::reduce::run(a),
        Command::Robust(a) => cmd::robust::run(a),
        Command::VerifyNlp(a) => cmd::verify::nlp(a),
        Command::VerifyHardness(a) => cmd::verify::hardness(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(CHECK_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}

fn write_output(path: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    use anyhow::Context;
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
