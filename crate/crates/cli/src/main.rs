use std::process::ExitCode;

use clap::Parser;
use specrange_cli::args::Cli;
use specrange_cli::{configure_threads, run};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = std::env::var("SPECRANGE_THREADS").ok();
    let outcome = configure_threads(threads.as_deref()).and_then(|_| run(&cli));
    match outcome {
        Ok(files) => {
            for f in files {
                eprintln!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
