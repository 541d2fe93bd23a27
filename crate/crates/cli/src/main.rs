use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use entropic_cli::compare::run_compare;
use entropic_cli::config::ScenarioConfig;
use entropic_cli::omega::run_omega;
use entropic_cli::output::{write_csv, write_svg};
use entropic_cli::verify::run_verify;
use entropic_cli::{CliError, Result};
use entropic_core::LogBase;

/// Entropic uncertainty bounds for N projective measurements.
#[derive(Debug, Parser)]
#[command(name = "entropic", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the configured bounds over the scenario's sweep and write a CSV table.
    Compare(Common),
    /// Run the invariant suite; exit status 1 if any property fails.
    Verify(Common),
    /// Print ω, ω̂ and ω₀ for each sweep point.
    Omega(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Scenario file (TOML). `verify` runs its built-in suite when omitted.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// CSV destination, overriding the file's [output] csv; stdout otherwise.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Logarithm base: 2 or e.
    #[arg(long)]
    log_base: Option<LogBase>,
    /// Cap on block-Gram evaluations per ω computation.
    #[arg(long)]
    budget: Option<u64>,
    /// Replaces every seed in the scenario.
    #[arg(long)]
    seed: Option<u64>,
}

impl Common {
    fn load(&self) -> Result<ScenarioConfig> {
        let path = self
            .config
            .as_ref()
            .ok_or_else(|| CliError::Config("--config is required for this subcommand".into()))?;
        let mut c = ScenarioConfig::from_path(path)?;
        self.apply(&mut c);
        Ok(c)
    }

    fn apply(&self, c: &mut ScenarioConfig) {
        if let Some(b) = self.log_base {
            c.log_base = b;
        }
        if let Some(b) = self.budget {
            c.budget = b;
        }
        if let Some(s) = self.seed {
            c.override_seed(s);
        }
        if let Some(o) = &self.output {
            c.csv = Some(o.clone());
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compare(args) => {
            let config = args.load()?;
            let result = run_compare(&config)?;
            for note in &result.notes {
                eprintln!("# {note}");
            }
            write_csv(&result.table, config.csv.as_deref())?;
            if let Some(svg) = &config.svg {
                let title = args
                    .config
                    .as_ref()
                    .and_then(|p| p.file_stem())
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                write_svg(&result.table, config.log_base, &title, &result.notes, svg)?;
            }
            Ok(())
        }
        Command::Verify(args) => {
            let configs = match &args.config {
                Some(_) => vec![args.load()?],
                None => {
                    let mut suite = ScenarioConfig::default_suite(args.seed.unwrap_or(42));
                    for c in &mut suite {
                        args.log_base.inspect(|&b| c.log_base = b);
                        args.budget.inspect(|&b| c.budget = b);
                    }
                    suite
                }
            };
            let report = run_verify(&configs)?;
            print!("{}", report.render());
            match report.failed() {
                0 => Ok(()),
                n => Err(CliError::VerificationFailed(n)),
            }
        }
        Command::Omega(args) => {
            let config = args.load()?;
            print!("{}", run_omega(&config)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
