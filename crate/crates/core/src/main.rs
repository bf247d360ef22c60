use std::error::Error;

use clap::Parser;

use dmmm_sched::cli::{self, Cli, CliError, Command};

fn main() {
    let cli = Cli::parse();
    if let Err(err) = dispatch(&cli) {
        eprintln!("error: {err}");
        let mut cause = err.source();
        while let Some(inner) = cause {
            eprintln!("  caused by: {inner}");
            cause = inner.source();
        }
        std::process::exit(err.exit_code());
    }
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Schedule(opts) => {
            print!("{}", cli::cmd_schedule(opts)?.summary());
        }
        Command::Compare(opts) => {
            let outcome = cli::cmd_compare(opts)?;
            for algorithm in &outcome.dropped {
                eprintln!("warning: duplicate algorithm {algorithm} ignored");
            }
            print!("{}", outcome.summary());
        }
        Command::Monitor(opts) => {
            print!("{}", cli::cmd_monitor(opts)?.summary());
        }
        Command::Pipeline(opts) => {
            print!("{}", cli::cmd_pipeline(opts)?.summary());
        }
    }
    Ok(())
}
