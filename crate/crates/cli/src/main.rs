use std::process::ExitCode;

use clap::Parser;
use cyl_unwrap_cli::{run, Cli, RunConfig, OUT_ENV};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let env_out = std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()).map(Into::into);
    let result = RunConfig::resolve(&cli.overrides, env_out).and_then(|cfg| run(cli.command, &cfg));
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprint!("error: {e}");
            if !e.to_string().ends_with('\n') {
                eprintln!();
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
