use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use impurity_thermo_cli::{spectra, table, verify, CliError, RunConfig, StatSelection, EXIT_ERROR, EXIT_OK, EXIT_VERIFY_FAILED};

#[derive(Parser)]
#[command(name = "impurity-thermo", version, about = "Hybridization thermodynamics of a bosonic or fermionic oscillator in a Drude bath")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write spectra.csv: response functions, varphi and vartheta on the frequency grid.
    Spectra(Args),
    /// Write thermo.csv: A, U, S over the temperature grid.
    Thermo(Args),
    /// Print the verification report as JSON; exit 1 if any check fails.
    Verify(Args),
}

#[derive(clap::Args)]
struct Args {
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides `statistics` from the config.
    #[arg(long)]
    stat: Option<StatSelection>,
    /// Output directory for CSV files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

impl Args {
    fn load(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(stat) = self.stat {
            cfg.statistics = stat;
            cfg.validate()?;
        }
        Ok(cfg)
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("IMPURITY_THERMO_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("IMPURITY_THERMO_THREADS: expected a non-negative integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(format!("IMPURITY_THERMO_THREADS: {e}")))
}

fn run(cli: Cli) -> Result<u8, CliError> {
    init_threads()?;
    match cli.command {
        Command::Spectra(args) => spectra::run(&args.load()?, &args.out).map(|_| EXIT_OK),
        Command::Thermo(args) => table::run(&args.load()?, &args.out).map(|_| EXIT_OK),
        Command::Verify(args) => {
            let report = verify::run(&args.load()?)?;
            print!("{}", report.to_json());
            Ok(if report.overall { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { EXIT_OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("impurity-thermo: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
