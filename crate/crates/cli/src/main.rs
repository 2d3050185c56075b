use std::process::ExitCode;

use bcv_cli::config::Cli;
use bcv_cli::{run, CliError, RunConfig};
use clap::Parser;

fn fail(e: CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    // clap prints help/version to stdout and usage errors to stderr (exit 2)
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    let config = match RunConfig::try_from(cli.command) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };

    let written = run(&config).and_then(|out| match &config.out {
        Some(path) => std::fs::write(path, out).map_err(CliError::from),
        None => {
            print!("{out}");
            Ok(())
        }
    });
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}
