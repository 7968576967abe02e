use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use lhy_lab::cli::{run, Command, RunConfig};

/// Numerical laboratory for the Lee–Huang–Yang upper bound.
#[derive(Debug, Parser)]
#[command(name = "lhy-lab", version, about)]
struct Args {
    /// What to compute.
    #[arg(value_enum)]
    command: Command,
    /// JSON configuration file (`{}` selects every default).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override a configuration entry, e.g. `--set sweep.xs=[1e-6,1e-7]`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let started = Instant::now();
    let result = RunConfig::load(&args.config, &args.overrides)
        .and_then(|config| run(args.command, &config, &args.out));
    match result {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            println!("{}", outcome.summary);
            // Timing goes to stderr so that the artifacts stay reproducible.
            eprintln!("wall time {:.2} s", started.elapsed().as_secs_f64());
            if args.command == Command::Verify && !outcome.pass {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
