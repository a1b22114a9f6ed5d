use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rotset_cli::{invoke, Invocation};

#[derive(Parser)]
#[command(name = "rotset", version, about = "Rotation sets and invariant manifolds of torus maps")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the command described by a config file.
    Run {
        config: PathBuf,
        /// Output directory (overrides `run.out`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// RNG seed (overrides `run.rng_seed`).
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; outputs do not depend on it.
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn main() -> ExitCode {
    let Cmd::Run {
        config,
        out,
        seed,
        threads,
    } = Cli::parse().cmd;
    let inv = Invocation {
        config,
        out,
        seed,
        threads,
    };
    match invoke(&inv) {
        Ok(done) => {
            for w in &done.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", done.report);
            println!("outputs written to {}", done.out_dir.display());
            ExitCode::from(done.exit_code())
        }
        Err(e) => {
            eprintln!("rotset: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
