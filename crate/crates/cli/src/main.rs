mod args;
mod commands;

use args::{Cli, Command};
use clap::Parser;
use std::process::ExitCode;

/// `MAASS_THREADS` wins over `--threads`.
fn thread_count(flag: Option<usize>) -> Result<Option<usize>, String> {
    let n = match std::env::var("MAASS_THREADS") {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| format!("MAASS_THREADS={v:?} is not a thread count"))?,
        ),
        Err(_) => flag,
    };
    match n {
        Some(0) => Err("thread count must be at least 1".into()),
        n => Ok(n),
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    if let Some(n) = thread_count(cli.output.threads).map_err(anyhow::Error::msg)? {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match &cli.command {
        Command::Coeff(a) => commands::coeff(a, &cli.output),
        Command::Basis(a) => commands::basis(a, &cli.output),
        Command::Verify(a) => commands::verify(a, &cli.output),
        Command::Kloosterman(a) => commands::kloosterman(a, &cli.output),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { commands::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::EXIT_USAGE as u8)
        }
    }
}
