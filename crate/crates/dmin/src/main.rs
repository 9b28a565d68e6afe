use std::process::ExitCode;

use clap::Parser;
use dmin::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = dmin::thread_cap(std::env::var("DMIN_THREADS").ok().as_deref())
        .and_then(|threads| dmin::run_with_threads(&cli.command, threads));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("dmin: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
