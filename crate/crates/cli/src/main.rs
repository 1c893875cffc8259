use std::io::Write;
use std::process::ExitCode;

use circdeg_cli::{execute, Cli};
use clap::Parser;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let mut stderr = std::io::stderr();
    let outcome = execute(&cli, &mut stderr);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(outcome.text.as_bytes());
    let _ = stdout.flush();
    if let Some(err) = &outcome.error {
        eprintln!("error: {err}");
    }
    ExitCode::from(outcome.code as u8)
}
