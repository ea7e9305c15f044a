use std::process::ExitCode;

use clap::Parser;
use streamdfs_harness::cli::{cmd_experiment, cmd_run, cmd_validate, Cli, Command, EXIT_FORMAT};

/// `DFS_STREAM_LOG` is `off`, `stats` or `trace`; anything else is passed to
/// the logger as a filter. Warnings are shown by default.
fn init_logging() {
    let filter = match std::env::var("DFS_STREAM_LOG").as_deref() {
        Ok("off") => "off".to_string(),
        Ok("stats") => "info".to_string(),
        Ok("trace") => "trace".to_string(),
        Ok(other) => other.to_string(),
        Err(_) => "warn".to_string(),
    };
    env_logger::Builder::new()
        .parse_filters(&filter)
        .format_timestamp(None)
        .init();
}

fn main() -> ExitCode {
    init_logging();
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Validate(args) => Ok(cmd_validate(args)),
    };
    match code {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_FORMAT)
        }
    }
}
