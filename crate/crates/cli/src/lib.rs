//! `qsum` command-line front end: ingest articles, solve with QAOA, XY-QAOA
//! or L-VQE, map Pareto frontiers and score summaries with ROUGE.

pub mod args;
pub mod commands;
pub mod error;
pub mod report;

pub use args::Cli;
pub use commands::execute;
pub use error::CliError;

/// Runs `cli` on a pool of `cli.threads` workers, or the global pool.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be positive".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {t} threads: {e}")))?
            .install(|| execute(cli)),
        None => execute(cli),
    }
}
