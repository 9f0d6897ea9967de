use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use qlift::{emit, execute, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are input errors; help and version are not errors
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match execute(&cli).and_then(|v| emit(&v, cli.opts.out.as_deref())) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qlift: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
