use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use oscillock::config::{Overrides, ScenarioConfig};
use oscillock::error::{Error, Result};
use oscillock::runner;

/// Relational evolution against an oscillating clock.
#[derive(Parser)]
#[command(name = "oscillock", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Observable moments along τ.
    Evolve(Common),
    /// Accumulated eigenphases with both reference laws.
    Phases(Common),
    /// Position density on an (x, τ) grid.
    Density(Common),
    /// Period dispersion of ⟨x⟩ across clock frequencies.
    SigmaSweep(Common),
    /// Upper bound on the clock period.
    Bound {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        system_period: Option<f64>,
    },
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML). Defaults apply to anything it leaves out.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    tau_max: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn configure(
    common: &Common,
    sigma: Option<f64>,
    system_period: Option<f64>,
) -> Result<ScenarioConfig> {
    let base = match &common.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    base.apply(&Overrides {
        lambda: common.lambda,
        tau_max: common.tau_max,
        out: common.out.clone(),
        sigma,
        system_period,
    })
}

fn init_threads() -> Result<()> {
    let Ok(raw) = std::env::var("OSCILLOCK_THREADS") else {
        return Ok(());
    };
    let threads: usize =
        raw.trim()
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| Error::Config {
                field: "OSCILLOCK_THREADS".into(),
                message: format!("expected a positive integer, got `{raw}`"),
            })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Numerical(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<runner::RunReport> {
    init_threads()?;
    match cli.command {
        Command::Evolve(c) => runner::run_evolve(&configure(&c, None, None)?),
        Command::Phases(c) => runner::run_phases(&configure(&c, None, None)?),
        Command::Density(c) => runner::run_density(&configure(&c, None, None)?),
        Command::SigmaSweep(c) => runner::run_sigma_sweep(&configure(&c, None, None)?),
        Command::Bound {
            common,
            sigma,
            system_period,
        } => runner::run_bound(&configure(&common, sigma, system_period)?),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(report) => {
            println!("{}", report.summary);
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
