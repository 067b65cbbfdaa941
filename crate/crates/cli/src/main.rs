use std::io;
use std::process::ExitCode;

use clap::Parser;
use landau_cli::{precision_from_env, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = precision_from_env().and_then(|p| run(&cli, p, &mut io::stdout().lock()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("landau-cs: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
