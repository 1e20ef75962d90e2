//! Certificate bundles: the task that was run, what it claims, and the
//! results, in a versioned JSON document that `verify` replays from scratch.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::tasks::Task;
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateBundle {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub parameters: Task,
    pub claims: Vec<String>,
    pub results: Value,
    pub verdict: bool,
    /// Human-readable one-liner; not part of the replay comparison.
    pub summary: String,
    pub elapsed_ms: u64,
}

impl CertificateBundle {
    pub fn run(task: Task) -> Result<CertificateBundle, CliError> {
        Self::run_with(task, None, None)
    }

    pub fn run_with(
        task: Task,
        checkpoint: Option<&std::path::Path>,
        relations_out: Option<&std::path::Path>,
    ) -> Result<CertificateBundle, CliError> {
        let start = std::time::Instant::now();
        let outcome = task.run_with(checkpoint, relations_out)?;
        Ok(CertificateBundle {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: task.name().to_string(),
            claims: task.claims(),
            parameters: task,
            results: outcome.results,
            verdict: outcome.verdict,
            summary: outcome.summary,
            elapsed_ms: start.elapsed().as_millis() as u64,
        })
    }

    pub fn from_json(text: &str) -> Result<CertificateBundle, CliError> {
        let b: CertificateBundle =
            serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
        if b.schema_version != SCHEMA_VERSION {
            return Err(CliError::Schema(format!(
                "schema version {} (expected {SCHEMA_VERSION})",
                b.schema_version
            )));
        }
        Ok(b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    /// Recomputed results equal the stored ones and the recomputed verdict passes.
    pub math_ok: bool,
    /// Command name and claims match what the parameters imply.
    pub metadata_ok: bool,
    pub mismatches: Vec<String>,
}

/// Collect the JSON paths where `a` and `b` differ (first few only).
fn diff_paths(a: &Value, b: &Value, path: &str, out: &mut Vec<String>) {
    if out.len() >= 8 {
        return;
    }
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            for (k, va) in x {
                match y.get(k) {
                    Some(vb) => diff_paths(va, vb, &format!("{path}.{k}"), out),
                    None => out.push(format!("{path}.{k} missing")),
                }
            }
            for k in y.keys().filter(|k| !x.contains_key(*k)) {
                out.push(format!("{path}.{k} unexpected"));
            }
        }
        (Value::Array(x), Value::Array(y)) if x.len() == y.len() => {
            for (i, (va, vb)) in x.iter().zip(y).enumerate() {
                diff_paths(va, vb, &format!("{path}[{i}]"), out);
            }
        }
        _ if a != b => out.push(format!("{path} differs")),
        _ => {}
    }
}

/// Re-run the bundle's task from its parameters and compare everything.
pub fn verify(bundle: &CertificateBundle) -> Result<VerifyReport, CliError> {
    let fresh = bundle.parameters.run()?;
    let mut mismatches = Vec::new();
    diff_paths(&fresh.results, &bundle.results, "results", &mut mismatches);
    if fresh.verdict != bundle.verdict {
        mismatches.push(format!(
            "verdict: stored {}, recomputed {}",
            bundle.verdict, fresh.verdict
        ));
    }
    let math_ok = mismatches.is_empty() && fresh.verdict;
    let mut metadata_ok = true;
    if bundle.command != bundle.parameters.name() {
        metadata_ok = false;
        mismatches.push(format!("command {:?} does not match parameters", bundle.command));
    }
    if bundle.claims != bundle.parameters.claims() {
        metadata_ok = false;
        mismatches.push("claims differ from the task's claims".into());
    }
    Ok(VerifyReport {
        math_ok,
        metadata_ok,
        mismatches,
    })
}
