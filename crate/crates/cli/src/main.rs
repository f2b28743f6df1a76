//! `qnslab`: batch runner for the dispersion, QNS, acoustic and low Mach
//! number studies.
//!
//! Exit codes: 0 success, 2 configuration error, 3 a checked invariant
//! failed, 4 numerical abort, 1 anything else (I/O).

mod acoustic;
mod common;
mod dispersion;
mod limit;
mod qns;
mod strichartz;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use common::{CliError, Context};

#[derive(Parser, Debug)]
#[command(name = "qnslab", version, about = "Low Mach number QNS experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON parameter document; omitted keys take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = "qnslab-out")]
    out: PathBuf,

    /// Seed for every randomized input.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Dispersive decay, ε-gain, h-bound envelope and scaling identity.
    Dispersion,
    /// Strichartz ratio sweeps over admissible pairs and ε.
    Strichartz,
    /// Single QNS trajectory with energy and BD-entropy series.
    Qns,
    /// Propagator algebra and acoustic decay study.
    Acoustic,
    /// Low Mach number convergence study and exponent tables.
    Limit,
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Other(e.to_string()))?;
    }
    std::fs::create_dir_all(&cli.out).map_err(|e| CliError::Other(format!("cannot create {}: {e}", cli.out.display())))?;
    let ctx = Context {
        out: cli.out.clone(),
        seed: cli.seed,
        threads: cli.threads.unwrap_or_else(rayon::current_num_threads),
        config_path: cli.config.clone(),
    };
    let summary = match cli.command {
        Command::Dispersion => dispersion::run(&ctx)?,
        Command::Strichartz => strichartz::run(&ctx)?,
        Command::Qns => qns::run(&ctx)?,
        Command::Acoustic => acoustic::run(&ctx)?,
        Command::Limit => limit::run(&ctx)?,
    };
    let ok = summary.passed();
    summary.write(&ctx)?;
    for inv in summary.failures() {
        eprintln!("invariant failed: {}: {}", inv.name, inv.detail);
    }
    println!("{}", ctx.out.join("summary.json").display());
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
