use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use spectra_cli::config::{default_k_list, parse_k_list};
use spectra_cli::{emit, run, CliError, Command, Level, OutputFormat, RunConfig};

/// Spectra of -d²/dt² + (t^(k+1)/(k+1) - α)²: eigenvalues, band minima,
/// closed-form bounds and the large-k limit.
#[derive(Parser)]
#[command(name = "spectra", version, about)]
struct Cli {
    #[arg(value_enum)]
    command: Command,

    /// Comma list or range, e.g. `1,3,5` or `3..49:2`.
    #[arg(long)]
    k: Option<String>,

    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,

    #[arg(long, default_value_t = 3)]
    jmax: u32,

    #[arg(long)]
    eps: Option<f64>,

    /// Table 1 deviation threshold.
    #[arg(long)]
    tol: Option<f64>,

    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,

    #[arg(long)]
    out: Option<PathBuf>,

    /// Spectrum cache file; defaults to $SPECTRA_CACHE.
    #[arg(long)]
    cache: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Level::Fast)]
    level: Level,
}

fn config(cli: Cli) -> Result<RunConfig, CliError> {
    let k_list = match &cli.k {
        Some(s) => parse_k_list(s)?,
        None => default_k_list(cli.command),
    };
    let cache_path = cli.cache.or_else(|| std::env::var_os("SPECTRA_CACHE").map(PathBuf::from));
    Ok(RunConfig {
        command: cli.command,
        k_list,
        alpha: cli.alpha,
        j_max: cli.jmax,
        eps: cli.eps,
        tolerance: cli.tol,
        output_format: cli.format,
        output_path: cli.out,
        cache_path,
        level: cli.level,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = config(cli).and_then(|cfg| {
        let outcome = run(&cfg)?;
        if let Some(text) = emit(&outcome.record, &cfg)? {
            print!("{text}");
        }
        Ok(outcome.exit_code())
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("spectra: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
