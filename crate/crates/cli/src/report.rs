//! Run reports, errors and atomic output.

use std::io::Write;
use std::path::{Path, PathBuf};

use lorentz_lab::tol::Tolerances;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("{0}")]
    Math(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Math(_) => 1,
        }
    }
}

impl From<lorentz_lab::Error> for CliError {
    fn from(e: lorentz_lab::Error) -> Self {
        use lorentz_lab::Error as E;
        match e {
            E::Structural(_) => CliError::Parse(e.to_string()),
            E::InvalidChain(_) | E::NonCausal(..) => CliError::Math(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

/// Result of one command before it is wrapped into a [`RunReport`].
#[derive(Debug, Default)]
pub struct Outcome {
    pub pass: bool,
    pub details: Value,
    pub witness: Option<Value>,
    pub warnings: Vec<String>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub verdict: Verdict,
    pub exit_code: i32,
    pub seed: Option<u64>,
    pub tolerances: Option<Tolerances>,
    pub details: Value,
    pub witness: Option<Value>,
    pub warnings: Vec<String>,
    pub error: Option<String>,
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn new(command: Vec<String>, tolerances: Option<Tolerances>, result: Result<Outcome, CliError>, wall: f64) -> Self {
        match result {
            Ok(o) => RunReport {
                command,
                verdict: if o.pass { Verdict::Pass } else { Verdict::Fail },
                exit_code: if o.pass { 0 } else { 1 },
                seed: o.seed,
                tolerances,
                details: o.details,
                witness: o.witness,
                warnings: o.warnings,
                error: None,
                wall_time_s: wall,
            },
            Err(e) => RunReport {
                command,
                verdict: Verdict::Error,
                exit_code: e.exit_code(),
                seed: None,
                tolerances,
                details: Value::Null,
                witness: None,
                warnings: Vec::new(),
                error: Some(e.to_string()),
                wall_time_s: wall,
            },
        }
    }
}

/// Writes to a temporary file in the target directory, then renames it.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.to_owned(), source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_vec_pretty(value).map_err(|e| CliError::Parse(e.to_string()))?;
    text.push(b'\n');
    write_atomic(path, &text)
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Parse(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Parse(e.to_string()))?;
    write_atomic(path, &bytes)
}
