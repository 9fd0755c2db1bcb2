use std::fmt;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use twistbench_core::io::{elaborate, import_document, parse_spec, Kind, SpecError};
use twistbench_core::{Algebra, CheckReport};

use crate::FileArgs;

/// A spec error prefixed with the file it came from.
#[derive(Debug)]
pub struct SpecFileError {
    path: String,
    source: SpecError,
}

impl SpecFileError {
    pub fn kind_failure(&self) -> Option<&CheckReport> {
        match &self.source {
            SpecError::KindFailure { report, .. } => Some(report),
            _ => None,
        }
    }
}

impl fmt::Display for SpecFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.path, self.source)
    }
}

impl std::error::Error for SpecFileError {}

pub struct Loaded {
    pub name: String,
    pub kind: Kind,
    pub algebra: Algebra,
    /// The declared kind's report when it failed under `--lenient`.
    pub kind_failure: Option<CheckReport>,
}

/// Reads a `.alg` spec (elaborated against its declared kind) or a JSON
/// algebra or twist document.
pub fn load(args: &FileArgs) -> Result<Loaded> {
    let path = &args.file;
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("algebra")
        .to_string();
    if is_json(path) {
        let algebra = import_document(&text).with_context(|| format!("{}", path.display()))?;
        return Ok(Loaded {
            name: stem,
            kind: Kind::Raw,
            algebra,
            kind_failure: None,
        });
    }
    let wrap = |source| SpecFileError {
        path: path.display().to_string(),
        source,
    };
    let spec = parse_spec(&text).map_err(wrap)?;
    let e = elaborate(&spec, args.lenient).map_err(wrap)?;
    Ok(Loaded {
        name: e.name,
        kind: e.kind,
        algebra: e.algebra,
        kind_failure: e.report.filter(|r| r.failed()),
    })
}

pub fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "json")
}

pub fn is_alg(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "alg")
}
