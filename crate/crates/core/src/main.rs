use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use mukai_kit::cli::{self, Command, CommandArgs};
use mukai_kit::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Exact Mukai-lattice, Fourier–Mukai and wall computations on elliptic surfaces.
#[derive(Debug, Parser)]
#[command(name = "mukai-kit", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the scan diagram here (walls-scan only).
    #[arg(long)]
    plot: Option<PathBuf>,
    #[command(flatten)]
    args: CommandArgs,
}

fn run(cli: &Cli) -> Result<i32, Error> {
    if cli.plot.is_some() && cli.command != Command::WallsScan {
        return Err(Error::Parse("--plot is only available for walls-scan".into()));
    }
    let text = cli::config::read(&cli.config)?;
    let report = cli::execute(cli.command, &text, &cli.args)?;
    if let (Some(path), Some(plot)) = (&cli.plot, &report.plot) {
        std::fs::write(path, cli::svg::render(plot))
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    match cli.format {
        Format::Json => print!("{}", report.to_json()),
        Format::Csv => print!("{}", report.to_csv()),
    }
    Ok(report.outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("mukai-kit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
