use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sksphere_cli::{parse_base, run_check, run_info, run_realize, CliError, RunConfig, RunOptions};

/// Special Kähler structures of holomorphic prepotentials, certified and
/// realized as parabolic affine spheres.
#[derive(Parser)]
#[command(name = "sksphere", version)]
struct Cli {
    /// Multiply every residual tolerance by this factor.
    #[arg(long, global = true, default_value_t = 1.0)]
    tol_scale: f64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every residual check over the sample plan and write the JSON report.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
    /// Write the realized samples as CSV (and an OBJ mesh when m = 1).
    Realize {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print signatures, curvature and congruence data at the base point.
    Info {
        #[arg(long)]
        config: PathBuf,
        /// Base point as comma-separated reals `re1,im1,re2,im2,…`.
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    if !(cli.tol_scale.is_finite() && cli.tol_scale > 0.0) {
        return Err(CliError::Config("--tol-scale must be positive".into()));
    }
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(format!("--jobs: {e}")))?;
    }
    let opts = RunOptions { tol_scale: cli.tol_scale };
    match cli.command {
        Command::Check { config } => run_check(&RunConfig::load(&config)?, opts),
        Command::Realize { config } => run_realize(&RunConfig::load(&config)?, opts),
        Command::Info { config, base } => {
            let cfg = RunConfig::load(&config)?;
            let base = base.map(|b| parse_base(&b, cfg.m)).transpose()?;
            run_info(&cfg, base, &mut std::io::stdout().lock())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
