use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use mixquant::cli::{run, Cli};

fn main() -> ExitCode {
    let out = run(&Cli::parse());
    print!("{}", out.stdout);
    let _ = std::io::stdout().flush();
    if !out.stderr.is_empty() {
        eprintln!("error: {}", out.stderr);
    }
    ExitCode::from(out.code)
}
