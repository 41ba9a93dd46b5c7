//! `klrlab` — command-line driver for exact KLR and cyclotomic computations.
//!
//! Every invocation writes one newline-terminated JSON document (or a CSV
//! table with `--format csv`). Exit status: 0 on success, 1 when a check
//! fails or when `--require-exact` is set and some result is only valid
//! below the caps, 2 on usage errors.

mod cache;
mod commands;
mod output;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::cache::{Cache, Entry, Lookup};
use crate::commands::{cache_key, execute, CliError, Command, Common};
use crate::output::Format;

/// Exact computations with type-A KLR algebras, their cyclotomic quotients
/// and Gelfand–Tsetlin branching.
#[derive(Parser, Debug)]
#[command(name = "klrlab", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

/// The computed (or cached) document and verdicts.
fn compute(cli: &Cli) -> Result<Entry, CliError> {
    let key = cache_key(&cli.command, &cli.common)?;
    let cache = match &key {
        Some(_) if !cli.common.no_cache => Cache::locate(cli.common.cache_dir.as_deref()),
        _ => None,
    };
    if let (Some(cache), Some(key)) = (&cache, &key) {
        match cache.get(key) {
            Lookup::Hit(entry) => return Ok(entry),
            Lookup::Corrupt => eprintln!(
                "warning: cache entry {} failed its integrity check; recomputing",
                cache.path_for(key).display()
            ),
            Lookup::Miss => {}
        }
    }
    let outcome = execute(&cli.command, &cli.common)?;
    let payload = serde_json::to_string(&outcome.doc).map_err(|e| CliError::Failure(e.to_string()))?;
    let entry = Entry::new(key.clone().unwrap_or_default(), outcome.ok, outcome.exact, payload);
    if let (Some(cache), Some(_)) = (&cache, &key) {
        if let Err(e) = cache.put(&entry) {
            eprintln!("warning: could not write cache in {}: {e}", cache.dir().display());
        }
    }
    Ok(entry)
}

fn emit(cli: &Cli, entry: &Entry) -> Result<(), CliError> {
    let text = match cli.common.format {
        Format::Json => format!("{}\n", entry.payload),
        Format::Csv => {
            let doc: serde_json::Value =
                serde_json::from_str(&entry.payload).map_err(|e| CliError::Failure(e.to_string()))?;
            output::to_csv(&doc).map_err(|e| CliError::Failure(e.to_string()))?
        }
    };
    match &cli.common.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = compute(&cli).and_then(|entry| emit(&cli, &entry).map(|()| entry));
    match result {
        Ok(entry) => {
            if !entry.ok {
                ExitCode::from(1)
            } else if cli.common.require_exact && !entry.exact {
                eprintln!("error: result is capped and --require-exact is set");
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Usage(_) => ExitCode::from(2),
                CliError::Failure(_) | CliError::Io(_) => ExitCode::from(1),
            }
        }
    }
}
