use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use heatflux::harness::output::write_convergence_csv;
use heatflux::harness::{
    convergence_study, kernel_selfcheck, parse_levels, run_direct, run_experiment, ExperimentConfig,
};
use heatflux::KernelMode;

#[derive(Parser)]
#[command(
    name = "heatflux",
    version,
    about = "Boundary-integral heat flux reconstruction"
)]
struct Cli {
    /// Kernel constants; overrides `kernel_mode` in the config.
    #[arg(long, global = true, value_parser = parse_mode)]
    mode: Option<KernelMode>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite-difference and quadrature checks of the heat kernels.
    KernelCheck,
    /// Generate Dirichlet data (and the exact flux when available).
    Direct {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reconstruct the boundary flux; full or partial according to `zeta_max`.
    Inverse {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rebuild the temperature at the configured targets.
    Field {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Error of the reconstruction over a list of grid levels.
    Convergence {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated `NxM` levels, e.g. `16x32,32x64,64x128`.
        #[arg(long)]
        levels: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_mode(s: &str) -> Result<KernelMode, String> {
    s.parse()
}

fn load(path: &Path, mode: Option<KernelMode>) -> heatflux::Result<ExperimentConfig> {
    let mut config = ExperimentConfig::from_path(path)?;
    if let Some(mode) = mode {
        config.kernel_mode = mode;
    }
    Ok(config)
}

fn print_json<T: serde::Serialize>(value: &T) -> heatflux::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(heatflux::Error::io("<stdout>", e))
        }
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> heatflux::Result<ExitCode> {
    match cli.command {
        Command::KernelCheck => {
            let summary = kernel_selfcheck();
            for c in &summary.checks {
                println!(
                    "{:<4} {:<24} worst={:.3e} tol={:.1e} samples={}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.worst_error,
                    c.tolerance,
                    c.samples
                );
            }
            return Ok(if summary.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            });
        }
        Command::Direct { config, out } => {
            let mut config = load(&config, cli.mode)?;
            config.output.boundary_csv = Some(out);
            print_json(&run_direct(&config)?)?;
        }
        Command::Inverse { config, out } => {
            let mut config = load(&config, cli.mode)?;
            config.output.flux_csv = Some(out);
            config.targets.clear();
            print_json(&run_experiment(&config)?)?;
        }
        Command::Field { config, out } => {
            let mut config = load(&config, cli.mode)?;
            if config.targets.is_empty() {
                return Err(heatflux::Error::Config(
                    "field needs at least one target".into(),
                ));
            }
            config.output.field_csv = Some(out);
            print_json(&run_experiment(&config)?)?;
        }
        Command::Convergence {
            config,
            levels,
            out,
        } => {
            let config = load(&config, cli.mode)?;
            let rows = convergence_study(&config, &parse_levels(&levels)?)?;
            write_convergence_csv(&out, &rows)?;
            print_json(&rows)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
