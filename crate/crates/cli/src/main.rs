use std::process::ExitCode;

use clap::Parser;
use gcdsum_cli::{configure_threads, run, Cli, RunConfig, Status};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (command, flags) = cli.command.split();
    let outcome = configure_threads()
        .and_then(|()| RunConfig::resolve(command, &flags))
        .and_then(|cfg| run(&cfg));
    match outcome {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Violation(msg)) => {
            eprintln!("invariant violated: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
