use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use g2contact_cli::{emit, run, CliError, ConfigFile, Format, Overrides, RunConfig, Suite};

/// Builds almost contact metric structures from vector fields on the flat
/// 7-torus, classifies them and checks the associated identities.
#[derive(Debug, Parser)]
#[command(name = "g2contact", version)]
struct Args {
    /// Field-spec file (TOML, or JSON by extension).
    #[arg(long)]
    config: Option<PathBuf>,

    /// Suites to run, comma separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    suite: Option<Vec<Suite>>,

    /// Output directory; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "json")]
    format: Format,

    #[arg(long)]
    seed: Option<u64>,

    #[arg(long)]
    resolution: Option<usize>,

    #[arg(long)]
    subsamples: Option<usize>,

    /// Relative class-membership tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("G2CONTACT_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Usage(format!("G2CONTACT_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn execute(args: Args) -> Result<(), CliError> {
    configure_threads()?;
    let file = match &args.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let over = Overrides {
        suites: args.suite,
        seed: args.seed,
        resolution: args.resolution,
        subsamples: args.subsamples,
        tol: args.tol,
    };
    let config = RunConfig::resolve(file, over)?;
    let report = run(&config)?;
    emit(&report, args.format, args.out.as_deref())?;
    match report.first_failure {
        Some(name) => Err(CliError::Assertion(name)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("g2contact: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
