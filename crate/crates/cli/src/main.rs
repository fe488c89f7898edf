mod args;
mod commands;
mod config;
mod error;
mod plot;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // clap reports usage errors as 2; ours is 1
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Generate(a) => commands::cmd_generate(a),
        Command::Run(a) => commands::cmd_run(a),
        Command::Evaluate(a) => commands::cmd_evaluate(a),
        Command::Plot(a) => commands::cmd_plot(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
