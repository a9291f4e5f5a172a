use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nlneumann::config::{parse_spacing, ConfigFile, Overrides, RunConfig};
use nlneumann::harness::run_convergence;
use nlneumann::reference::band_checks;
use nlneumann::report::{convergence_csv, csv_file_name, write_atomic, Summary, SUMMARY_FILE};
use nlneumann::verify::{parse_domains, run_verification_suite, VerifyDomain};
use nlneumann::Error;

const EXIT_ERROR: u8 = 1;
const EXIT_BAND_FAILURE: u8 = 2;

/// Nonlocal Neumann diffusion: convergence studies and verification.
#[derive(Debug, Parser)]
#[command(name = "nlneumann", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a manufactured-solution convergence sweep.
    Converge(ConvergeArgs),
    /// Run the property verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    case: Option<String>,
    /// Horizon to spacing ratio δ/h.
    #[arg(long)]
    ratio: Option<String>,
    /// Comma-separated spacings, e.g. `2^-3,2^-4` or `0.125,1/16`.
    #[arg(long)]
    h_levels: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    solver_tol: Option<String>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Comma-separated subset of square, disk, ellipse, corner.
    #[arg(long)]
    domains: Option<String>,
    /// Print the ledger as JSON.
    #[arg(long)]
    json: bool,
    /// Scale the operator kernel by 2 to confirm the checks catch it.
    #[arg(long, hide = true)]
    seeded_fault: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_ERROR) } else { ExitCode::SUCCESS };
        }
    };
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Converge(args) => converge(args),
        Command::Verify(args) => verify(args),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_BAND_FAILURE),
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::from(EXIT_ERROR)
        }
    }
}

/// Caps the worker pool at `NLN_THREADS` when set.
fn configure_threads() -> Result<(), Error> {
    let Ok(value) = std::env::var("NLN_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("NLN_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Config(format!("cannot start {threads} worker threads: {e}")))
}

fn parse_number(flag: &str, s: &str) -> Result<f64, Error> {
    s.trim().parse().map_err(|e| Error::Config(format!("--{flag} `{s}`: {e}")))
}

fn overrides(args: &ConvergeArgs) -> Result<Overrides, Error> {
    let h_levels = args
        .h_levels
        .as_deref()
        .map(|list| {
            list.split(',')
                .map(|s| parse_spacing(s).map_err(|e| Error::Config(format!("--h-levels: {e}"))))
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;
    Ok(Overrides {
        case: args.case.clone(),
        ratio: args.ratio.as_deref().map(|r| parse_number("ratio", r)).transpose()?,
        h_levels,
        solver_tol: args.solver_tol.as_deref().map(|t| parse_number("solver-tol", t)).transpose()?,
        output_dir: args.out.clone(),
    })
}

fn converge(args: ConvergeArgs) -> Result<bool, Error> {
    let file = args.config.as_deref().map(ConfigFile::load).transpose()?;
    let config = RunConfig::resolve(file, overrides(&args)?)?;
    let sweep = run_convergence(config.case, config.ratio, &config.h_levels, &config.run_options())?;
    let checks = band_checks(config.case, &sweep.report);
    let summary = Summary::new(&sweep, checks);

    print!("{}", convergence_csv(&sweep.report));
    for c in &summary.checks {
        println!("{} {} = {:.4e} (bound {})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.value, c.bound);
    }

    std::fs::create_dir_all(&config.output_dir)
        .map_err(|source| Error::Io { path: config.output_dir.clone(), source })?;
    let csv_path = config.output_dir.join(csv_file_name(config.case.as_str(), config.ratio));
    let summary_path = config.output_dir.join(SUMMARY_FILE);
    let written = write_atomic(&csv_path, &convergence_csv(&sweep.report))
        .and_then(|()| write_atomic(&summary_path, &serde_json::to_string_pretty(&summary)?));
    if let Err(e) = written {
        remove_quietly(&csv_path);
        remove_quietly(&summary_path);
        return Err(e);
    }
    Ok(summary.passed)
}

fn remove_quietly(path: &Path) {
    if path.exists() {
        let _ = std::fs::remove_file(path);
    }
}

fn verify(args: VerifyArgs) -> Result<bool, Error> {
    let domains = match args.domains.as_deref() {
        Some(list) => parse_domains(list)?,
        None => VerifyDomain::ALL.to_vec(),
    };
    let ledger = run_verification_suite(&domains, args.seeded_fault)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&ledger)?);
    } else {
        print!("{ledger}");
        let total: usize = ledger.domains.iter().map(|d| d.checks.len()).sum();
        let failed: usize = ledger.domains.iter().flat_map(|d| &d.checks).filter(|c| !c.passed).count();
        println!("{total} checks, {failed} failed");
    }
    Ok(ledger.passed())
}
