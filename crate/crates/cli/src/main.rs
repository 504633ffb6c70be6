use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use cosetrepair_cli::{run, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &out.body),
        None => std::io::stdout().lock().write_all(out.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    ExitCode::from(out.exit)
}
