//! Command-line front end for `stieltjes-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod bounds;
pub mod compute;
pub mod error;
pub mod output;
pub mod plot;
pub mod saddle;
pub mod svg;
pub mod verify;

use args::{Cli, Command, Format};
use error::{CliError, Status};

/// Caps rayon's pool at `STIELTJES_THREADS` when set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("STIELTJES_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("STIELTJES_THREADS must be a positive integer, got {raw:?}")))?;
    if n == 0 {
        return Err(CliError::usage("STIELTJES_THREADS must be positive".to_string()));
    }
    // a second initialisation in the same process is harmless
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn run(cli: &Cli) -> Result<Status, CliError> {
    init_threads()?;
    match &cli.command {
        Command::Compute(c) => compute::run(&c.resolve((0.0, 10.0, 1.0), Format::Csv)?),
        Command::Bounds(c) => bounds::run(&c.resolve((1.0, 60.0, 1.0), Format::Csv)?),
        Command::Saddle(c) => saddle::run(&c.resolve((200.0, 200.0, 1.0), Format::Csv)?),
        Command::Verify(c) => verify::run(&c.resolve((1.0, 1.0, 1.0), Format::Csv)?),
        Command::Plot(c) => plot::run(&c.resolve((1.0, 300.0, 1.0), Format::Svg)?),
    }
}
