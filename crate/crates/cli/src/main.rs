use std::process::ExitCode;

use clap::Parser;
use stieltjes_cli::args::Cli;
use stieltjes_cli::error::Status;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Status::Usage } else { Status::Ok }.into();
        }
    };
    match stieltjes_cli::run(&cli) {
        Ok(s) => s.into(),
        Err(e) => {
            eprintln!("error: {e}");
            e.status.into()
        }
    }
}
