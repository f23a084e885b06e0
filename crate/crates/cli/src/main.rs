use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = isospec_cli::Cli::parse();
    match isospec_cli::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
