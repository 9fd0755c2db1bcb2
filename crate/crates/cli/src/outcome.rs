use std::io::{self, Write};
use std::process::ExitCode;

use serde_json::Value;
use twistbench_core::io::{export_report, to_canonical_string};
use twistbench_core::CheckReport;

/// What a subcommand produced: the exit code and the report in both
/// renderings.
pub struct Outcome {
    pub code: u8,
    pub json: Value,
    pub text: String,
}

impl Outcome {
    pub fn new(ok: bool, json: Value, text: impl Into<String>) -> Self {
        Outcome {
            code: if ok { 0 } else { 1 },
            json,
            text: text.into(),
        }
    }

    pub fn report(r: &CheckReport) -> Self {
        Outcome::new(r.passed(), export_report(r), r.to_string())
    }

    pub fn input_error() -> ExitCode {
        ExitCode::from(2)
    }

    pub fn emit(self, json: bool) -> ExitCode {
        let mut out = io::stdout().lock();
        // a closed pipe downstream is not our failure
        let _ = if json {
            out.write_all(to_canonical_string(&self.json).as_bytes())
        } else {
            writeln!(out, "{}", self.text.trim_end())
        };
        ExitCode::from(self.code)
    }
}
