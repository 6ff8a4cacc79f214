use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use carleman::error::{CliError, EXIT_NUMERIC};
use carleman::{report, Command, Format, Overrides, RunConfig, Settings};
use clap::Parser;

#[derive(Debug, Parser)]
#[command(name = "carleman", version)]
#[command(about = "Weight sequences, quasi-analyticity verdicts and polysector asymptotics")]
struct Cli {
    /// What to compute.
    #[arg(value_enum)]
    command: Command,

    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Report destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum)]
    format: Option<Format>,

    /// Index range for the finite checks.
    #[arg(long = "P")]
    range: Option<usize>,

    /// Oscillation budget for the growth index.
    #[arg(long)]
    a_max: Option<f64>,

    /// Comma-separated polysector openings.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    gamma: Option<Vec<f64>>,
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let out_path = cli.out.clone().or_else(|| cfg.out.clone());
    let format = cli.format.or(cfg.format).unwrap_or_default();
    let over = Overrides {
        range: cli.range,
        a_max: cli.a_max,
        gamma: cli.gamma,
    };
    let settings = Settings::resolve(cfg, over)?;
    let outcome = carleman::run(cli.command, &settings)?;

    let mut sink: Box<dyn Write> = match &out_path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    report::write_report(&mut sink, &outcome.report, format)?;
    sink.flush()?;
    Ok(outcome.failed)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("carleman: report contains errors");
            ExitCode::from(EXIT_NUMERIC)
        }
        Err(e) => {
            eprintln!("carleman: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
