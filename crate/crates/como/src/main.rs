//! Configuration-driven simulator front end.
//!
//! Reads a sectioned key-value experiment file, applies any command-line
//! overrides, echoes the realized configuration to stdout (stderr carries
//! status, so stdout re-parses as a config file), runs the experiment, and
//! writes the CSV tables. Exit codes: 0 on success, 2 for configuration
//! problems, 3 for failures while running or writing results.

use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use como::config::{self, Overrides};
use como::error::Error;
use como::{report, sim};

#[derive(Parser)]
#[command(version, about = "Combinatorial multi-objective bandit simulator")]
struct Args {
    /// Experiment configuration file.
    #[arg(long)]
    config: PathBuf,

    /// Directory for result files (created if missing).
    #[arg(long, default_value = "./out")]
    out_dir: PathBuf,

    /// Master seed, overriding the config.
    #[arg(long)]
    seed: Option<u64>,

    /// Replication count, overriding the config.
    #[arg(long)]
    runs: Option<u64>,

    /// Horizon, overriding the config.
    #[arg(long)]
    horizon: Option<u64>,

    /// Worker threads (default: available parallelism).
    #[arg(long)]
    workers: Option<NonZeroUsize>,

    /// Also write a gnuplot script next to the CSVs.
    #[arg(long)]
    emit_plots: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Config(_) | Error::EmptyInput(_) | Error::Domain(_) => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

fn run(args: &Args) -> Result<(), Error> {
    let text = std::fs::read_to_string(&args.config).map_err(|err| {
        Error::Config(format!("cannot read config `{}`: {err}", args.config.display()))
    })?;
    let base_dir = args.config.parent().unwrap_or(Path::new("."));
    let mut cfg = config::parse(&text, base_dir)?;
    cfg.apply(&Overrides { seed: args.seed, runs: args.runs, horizon: args.horizon });
    print!("{}", config::render(&cfg));

    let workers = args
        .workers
        .map(NonZeroUsize::get)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, NonZeroUsize::get));
    let result = sim::run_experiment(&cfg.spec, workers)?;
    let written =
        report::write_results(&cfg.name, cfg.spec.horizon, &result, &args.out_dir, args.emit_plots)?;
    for path in &written {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}
