//! Command-line front end: argument grammar, sub-commands, and the JSON/CSV
//! output records they produce.

pub mod args;
pub mod commands;
pub mod error;
pub mod record;

pub use args::{Cli, Format};
pub use commands::run;
pub use error::{CliError, CliResult};
pub use record::{Field, Num, OutputRecord, ResultEntry};

/// Caps rayon's global pool from `KHAV_THREADS` when set.
pub fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("KHAV_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("KHAV_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size thread pool: {e}")))
}

/// Renders a record in the requested format, with a trailing newline.
pub fn render(rec: &OutputRecord, format: Format) -> CliResult<String> {
    Ok(match format {
        Format::Json => rec.to_json()? + "\n",
        Format::Csv => rec.to_csv()?,
    })
}
