mod args;
mod commands;
mod error;
mod settings;

use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};

use args::{Cli, Command};
use error::CliError;

fn run() -> Result<(), CliError> {
    let cmd = Cli::command().mut_subcommands(|s| s.args_override_self(true));
    let argv = settings::expand(&cmd, std::env::args_os().collect())?;
    let matches = match cmd.try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return Ok(());
        }
        Err(e) => {
            let text = e.render().to_string();
            return Err(CliError::Usage(text.trim_start_matches("error: ").trim_end().to_string()));
        }
    };
    let cli = Cli::from_arg_matches(&matches).map_err(error::usage)?;
    match &cli.command {
        Command::Extract(a) => commands::extract(a),
        Command::Deviation(a) => commands::deviation(a),
        Command::Merge(a) => commands::merge(a),
        Command::Compose(a) => commands::compose(a),
        Command::Solve(a) => commands::solve(a),
        Command::Bench(a) => commands::bench(a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}
