use clap::Parser;
use cylbif_cli::{execute, Cli, CliError};
use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cylbif: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let artifact = execute(cli)?;
    match &cli.out {
        Some(path) => {
            std::fs::write(path, artifact).map_err(|e| CliError::Io(e.to_string()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(artifact.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}
