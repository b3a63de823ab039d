use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use gue_piv::verify::{Status, VerificationReport};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::args::{Format, GlobalOpts};

pub const TOOL: &str = "gue-piv";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn add(&mut self, status: Status) {
        self.checks += 1;
        match status {
            Status::Pass => self.passed += 1,
            Status::Fail => self.failed += 1,
            Status::Skipped => self.skipped += 1,
        }
    }

    pub fn add_bool(&mut self, pass: bool) {
        self.add(if pass { Status::Pass } else { Status::Fail });
    }

    pub fn of_reports(reports: &[VerificationReport]) -> Summary {
        let mut s = Summary::default();
        for r in reports {
            s.add(r.status);
        }
        s
    }

    pub fn merge(&mut self, other: Summary) {
        self.checks += other.checks;
        self.passed += other.passed;
        self.failed += other.failed;
        self.skipped += other.skipped;
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn line(&self, command: &str) -> String {
        format!(
            "{command}: {} checks, {} passed, {} failed, {} skipped",
            self.checks, self.passed, self.failed, self.skipped
        )
    }
}

/// What a command hands back for printing.
pub struct Outcome {
    pub result: Value,
    pub summary: Summary,
    /// Rows for CSV output, when the command supports it.
    pub reports: Option<Vec<VerificationReport>>,
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a Value,
    result: &'a Value,
    summary: &'a Summary,
}

pub const CSV_HEADER: &str = "identity,K,n,status,residual_degree,max_abs_residual_at_probes";

/// One CSV row per report. The zero residual has degree `-1`; a report
/// without witnesses leaves the last column empty.
pub fn csv_rows(reports: &[VerificationReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let degree = r.residual.degree().map_or(-1, |d| d as i64);
        let witness = r.max_abs_witness().map(|w| w.to_string()).unwrap_or_default();
        let status = serde_json::to_value(r.status).expect("status serializes");
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.identity.name(),
            r.k,
            r.n,
            status.as_str().expect("string"),
            degree,
            witness
        ));
    }
    out
}

pub fn render(command: &str, config: &Value, outcome: &Outcome, format: Format) -> Result<String, String> {
    match format {
        Format::Json => {
            let env = Envelope {
                tool: TOOL,
                version: gue_piv::VERSION,
                command,
                config,
                result: &outcome.result,
                summary: &outcome.summary,
            };
            let mut s = serde_json::to_string_pretty(&env).map_err(|e| e.to_string())?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => match &outcome.reports {
            Some(reports) => Ok(csv_rows(reports)),
            None => Err(format!("--format csv is only available for verify and suite, not {command}")),
        },
    }
}

/// Content-addressed file name: command plus the first 16 hex digits of the
/// SHA-256 of the canonical config JSON.
pub fn hashed_name(command: &str, config: &Value, format: Format) -> String {
    let canonical = serde_json::to_string(config).expect("config serializes");
    let digest = Sha256::digest(canonical.as_bytes());
    let ext = match format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    format!("{command}-{}.{ext}", &hex::encode(digest)[..16])
}

pub fn emit(command: &str, config: &Value, body: &str, opts: &GlobalOpts) -> std::io::Result<Option<PathBuf>> {
    match &opts.output {
        Some(path) => fs::write(path, body)?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    let Some(dir) = &opts.out_dir else {
        return Ok(None);
    };
    fs::create_dir_all(dir)?;
    let path = dir.join(hashed_name(command, config, opts.format));
    if !Path::exists(&path) {
        fs::write(&path, body)?;
    }
    Ok(Some(path))
}
