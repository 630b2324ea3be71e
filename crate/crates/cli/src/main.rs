use std::process::ExitCode;

use clap::Parser;
use scale_hilbert_cli::{run, Args, RunConfig};

fn main() -> ExitCode {
    let args = Args::parse();
    let result = RunConfig::from_args(args).and_then(|cfg| {
        let outcome = run(&cfg)?;
        outcome.write(cfg.output.as_deref())?;
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            if !outcome.pass {
                eprintln!("scale-hilbert: one or more certificates failed");
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("scale-hilbert: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
