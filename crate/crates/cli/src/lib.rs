//! Command-line front end for `landau-coherent`: figure sweeps, single-point
//! evaluations, state and measure tables, and the verification suites.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod figures;
pub mod table;
pub mod verify;

use std::io::Write;

use landau_coherent::observables::Precision;

pub use args::{Cli, Command, FigureId, Format, Suite};
pub use config::Settings;
pub use error::{CliError, Result};
pub use figures::{run_sweep, EvalContext, SweepSpec};
pub use table::{Cell, Table};

/// Environment variable selecting the series width.
pub const PRECISION_ENV: &str = "TOOL_PRECISION";

/// Reads [`PRECISION_ENV`]; unset means double.
pub fn precision_from_env() -> Result<Precision> {
    match std::env::var(PRECISION_ENV) {
        Ok(v) => v.parse().map_err(|e: landau_coherent::Error| CliError::usage(format!("{PRECISION_ENV}: {e}"))),
        Err(std::env::VarError::NotPresent) => Ok(Precision::Double),
        Err(e) => Err(CliError::usage(format!("{PRECISION_ENV}: {e}"))),
    }
}

/// Runs a parsed command line. Output goes to `--out` when given, else `stdout`.
pub fn run(cli: &Cli, precision: Precision, stdout: &mut dyn Write) -> Result<()> {
    let settings = Settings::resolve(cli)?;
    let out = settings.out.clone();
    let sink = match &out {
        Some(path) => commands::Sink::File(path),
        None => commands::Sink::Stdout(stdout),
    };
    match &cli.command {
        Command::Expect => commands::expect(&settings, precision, sink),
        Command::Figure(f) => commands::figure(f.id, &settings, precision, sink),
        Command::Verify(_) => commands::verify(&settings, precision, sink),
        Command::State(a) => commands::state(a.deformed, &settings, precision, sink),
        Command::Measure(m) => commands::measure(m.density, &settings, sink),
    }
}
