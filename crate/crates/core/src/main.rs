use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use noma_perf::cli::{self, Axis, RunConfig};
use noma_perf::Error;

#[derive(Parser)]
#[command(
    name = "noma-perf",
    version,
    about = "NOMA multicast/unicast outage and secrecy analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one parameter and write analytic and simulated values as CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// snr, sigma2 or k
        #[arg(long)]
        axis: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override a config key, e.g. `--set users=2`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Compare every closed form with simulation and check invariants.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long)]
        workers: Option<usize>,
    },
}

fn load(
    config: &Path,
    mut overrides: Vec<String>,
    seed: Option<u64>,
    trials: Option<u64>,
    workers: Option<usize>,
) -> Result<RunConfig, Error> {
    if let Some(s) = seed {
        overrides.push(format!("seed={s}"));
    }
    if let Some(t) = trials {
        overrides.push(format!("trials={t}"));
    }
    if let Some(w) = workers {
        overrides.push(format!("workers={w}"));
    }
    RunConfig::load(config, &overrides)
}

fn in_pool<T>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Error>
where
    T: Send,
{
    match workers {
        None => Ok(f()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Error::InvalidConfig(format!("cannot start {n} workers: {e}"))),
    }
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Sweep {
            config,
            axis,
            seed,
            trials,
            out,
            overrides,
            workers,
        } => {
            let axis: Axis = axis.parse()?;
            let cfg = load(&config, overrides, seed, trials, workers)?;
            let sink: Box<dyn Write + Send> =
                match &out {
                    Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
                        Error::Io(format!("cannot create {}: {e}", path.display()))
                    })?)),
                    None => Box::new(io::stdout()),
                };
            let rows = in_pool(cfg.workers, || cli::run_sweep(&cfg, axis, sink))??;
            if let Some(path) = out {
                eprintln!("wrote {rows} rows to {}", path.display());
            }
            Ok(cli::EXIT_OK)
        }
        Command::Verify {
            config,
            overrides,
            workers,
        } => {
            let cfg = load(&config, overrides, None, None, workers)?;
            let ok = in_pool(cfg.workers, || cli::verify(&cfg, io::stdout()))??;
            Ok(if ok {
                cli::EXIT_OK
            } else {
                cli::EXIT_VERIFY_FAILED
            })
        }
    }
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            cli::exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
