//! Command-line front end and file formats for `dmin-core`.

pub mod args;
pub mod commands;
pub mod formats;

pub use commands::{run, Failure};

/// Worker count from `DMIN_THREADS`, if set to a positive integer.
pub fn thread_cap(value: Option<&str>) -> Result<Option<usize>, Failure> {
    match value.map(str::trim) {
        None | Some("") => Ok(None),
        Some(s) => match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::new(commands::EXIT_INPUT, format!("DMIN_THREADS must be a positive integer, got `{s}`"))),
        },
    }
}

/// Runs `command` on a pool capped by `threads`. Results never depend on
/// the worker count: parallel maps keep index order and reductions are
/// sequential.
pub fn run_with_threads(command: &args::Command, threads: Option<usize>) -> Result<(), Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Failure::new(commands::EXIT_OTHER, e.to_string()))?;
    pool.install(|| run(command))
}
