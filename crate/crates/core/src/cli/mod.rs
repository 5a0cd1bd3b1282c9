//! Command-line front end. Every command writes a JSON [`RunReport`];
//! transformed files go to `--output` and are replaced atomically.

mod args;
mod bench;
mod run;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub use args::{Cli, Command};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Version of the report schema.
pub const REPORT_VERSION: &str = "1";

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Run(crate::Error),
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Run(e)
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Value,
    pub version: String,
    pub report_version: &'static str,
    pub inputs: Vec<InputDigest>,
    pub results: Value,
    pub wall_time_s: f64,
}

/// Tracks every file a command reads so the report can list its digest.
#[derive(Debug, Default)]
pub struct Context {
    inputs: Vec<InputDigest>,
}

impl Context {
    pub fn read_bytes(&mut self, path: &Path) -> crate::Result<Vec<u8>> {
        let bytes = std::fs::read(path).map_err(|source| crate::Error::File {
            path: path.to_path_buf(),
            source,
        })?;
        let path = path.display().to_string();
        if !self.inputs.iter().any(|d| d.path == path) {
            self.inputs.push(InputDigest {
                path,
                sha256: hex::encode(Sha256::digest(&bytes)),
            });
        }
        Ok(bytes)
    }

    pub fn read_text(&mut self, path: &Path) -> crate::Result<String> {
        let bytes = self.read_bytes(path)?;
        String::from_utf8(bytes)
            .map_err(|_| crate::Error::format(path.display().to_string(), 0, "UTF-8 text"))
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> crate::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let file_err = |source| crate::Error::File {
        path: path.to_path_buf(),
        source,
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(file_err)?;
    tmp.write_all(contents).map_err(file_err)?;
    tmp.as_file().sync_all().map_err(file_err)?;
    tmp.persist(path).map_err(|e| file_err(e.error))?;
    Ok(())
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

fn execute(cli: &Cli) -> CliResult<()> {
    let workers = cli
        .workers
        .map(usize::from)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, usize::from));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| {
            Failure::Run(crate::Error::invalid(format!(
                "cannot start worker pool: {e}"
            )))
        })?;
    let report = pool.install(|| run_report(&cli.command))?;
    let mut json = serde_json::to_string_pretty(&report).expect("reports serialize");
    json.push('\n');
    match &cli.report {
        Some(path) => write_atomic(path, json.as_bytes())?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(json.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Run(e.into()))?;
        }
    }
    Ok(())
}

/// Runs one command and builds its report.
pub fn run_report(command: &Command) -> CliResult<RunReport> {
    let started = Instant::now();
    let mut ctx = Context::default();
    let results = run::dispatch(command, &mut ctx)?;
    Ok(RunReport {
        command: serde_json::to_value(command).expect("commands serialize"),
        version: env!("CARGO_PKG_VERSION").to_string(),
        report_version: REPORT_VERSION,
        inputs: ctx.inputs,
        results,
        wall_time_s: started.elapsed().as_secs_f64(),
    })
}
