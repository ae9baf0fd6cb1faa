use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use propg_cli::{render_error, run_and_emit, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_and_emit(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let _ = std::io::stderr().write_all(render_error(&err, cli.format).as_bytes());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
