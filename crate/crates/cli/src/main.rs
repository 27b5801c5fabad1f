use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};
use qcfem_cli::{configure_threads, run, Cli, RunError};

/// Usage line of `sub`, or of the whole program when absent.
fn usage(sub: Option<&str>) -> String {
    let mut cmd = Cli::command();
    cmd.build();
    match sub.and_then(|s| cmd.find_subcommand_mut(s)) {
        Some(c) => c.clone().bin_name(format!("qcfem {}", c.get_name())).render_usage().to_string(),
        None => cmd.render_usage().to_string(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let sub = std::env::args().nth(1);
            eprint!("{}", e.render());
            eprintln!("\n{}", usage(sub.as_deref()));
            return ExitCode::from(2);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(&cli.command) {
        Ok(out) => {
            for f in &out.files {
                eprintln!("wrote {}", f.display());
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(RunError::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{}", usage(Some(cli.command.name())));
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
