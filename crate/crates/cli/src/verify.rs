//! `--verify-file`: recompute a stored artifact and re-check its certificates.

use std::path::Path;

use relfree_core::cp::{CpReport, DivisibilityCertificate};
use relfree_core::stallings::{fold, substitute_symbols};
use relfree_core::{BasisCertificate, Word};
use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};

use crate::commands::{envelope, CommandInput, SCHEMA};
use crate::{CliError, Format};

pub struct Outcome {
    /// The stored artifact equals a fresh recomputation from its input.
    pub matches_recomputation: bool,
    /// Recomputation matches and every embedded certificate re-checks.
    pub verified: bool,
    pub problems: Vec<String>,
}

pub fn verify_file(name: &str, path: &Path) -> Result<Outcome, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let stored: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Invalid(format!("{} is not JSON: {e}", path.display())))?;
    let Value::Object(fields) = &stored else {
        return Err(CliError::Invalid("artifact must be a JSON object".into()));
    };
    match fields.get("schema").and_then(Value::as_u64) {
        Some(SCHEMA) => {}
        other => {
            return Err(CliError::Invalid(format!(
                "unsupported schema {}; expected {SCHEMA}",
                other.map_or("(missing)".to_string(), |s| s.to_string())
            )))
        }
    }
    match fields.get("command").and_then(Value::as_str) {
        Some(command) if command == name => {}
        Some(command) => {
            return Err(CliError::Invalid(format!(
                "artifact was produced by {command}, not {name}"
            )))
        }
        None => return Err(CliError::Invalid("artifact has no command field".into())),
    }
    let raw_input = fields
        .get("input")
        .cloned()
        .ok_or_else(|| CliError::Invalid("artifact has no input field".into()))?;
    let input = CommandInput::from_json(name, raw_input)?;

    let mut problems = Vec::new();
    let matches_recomputation = match input.run() {
        Ok(output) => {
            let fresh = envelope(name, &input, &output);
            let same = fresh == stored;
            if !same {
                problems.extend(differences(fields, &fresh));
            }
            same
        }
        Err(e) => {
            problems.push(format!("recomputation failed: {}", error_text(&e)));
            false
        }
    };
    let checked = check_artifact(name, &input, fields, &mut problems);
    Ok(Outcome {
        matches_recomputation,
        verified: matches_recomputation && checked,
        problems,
    })
}

fn error_text(e: &CliError) -> &str {
    match e {
        CliError::Usage(m) | CliError::Invalid(m) => m,
    }
}

fn differences(stored: &Map<String, Value>, fresh: &Value) -> Vec<String> {
    let Value::Object(fresh) = fresh else {
        return vec!["recomputation is not an object".into()];
    };
    let mut keys: Vec<&String> = stored.keys().chain(fresh.keys()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter(|k| stored.get(*k) != fresh.get(*k))
        .map(|k| format!("field {k:?} differs from recomputation"))
        .collect()
}

fn field<T: DeserializeOwned>(
    fields: &Map<String, Value>,
    key: &str,
    problems: &mut Vec<String>,
) -> Option<T> {
    let Some(value) = fields.get(key) else {
        problems.push(format!("missing field {key:?}"));
        return None;
    };
    match serde_json::from_value(value.clone()) {
        Ok(v) => Some(v),
        Err(e) => {
            problems.push(format!("field {key:?}: {e}"));
            None
        }
    }
}

fn check_certificate(
    fields: &Map<String, Value>,
    subgroup: &[Word],
    problems: &mut Vec<String>,
) -> bool {
    let Some(certificate) = field::<BasisCertificate>(fields, "certificate", problems) else {
        return false;
    };
    let result = certificate
        .verify()
        .and_then(|()| certificate.check_extends(subgroup));
    match result {
        Ok(()) => true,
        Err(e) => {
            problems.push(format!("certificate: {e}"));
            false
        }
    }
}

/// Independent checks of the certificates embedded in the stored artifact.
fn check_artifact(
    name: &str,
    input: &CommandInput,
    fields: &Map<String, Value>,
    problems: &mut Vec<String>,
) -> bool {
    match input {
        CommandInput::TriangularSolve(i) => {
            check_certificate(fields, &i.witness.recipe.family(i.n), problems)
        }
        CommandInput::FreeFactor(i) => {
            if fields.get("status").and_then(Value::as_str) == Some("certified") {
                check_certificate(fields, &i.gens, problems)
            } else {
                true
            }
        }
        CommandInput::Primitive(i) => {
            if fields.get("primitive") != Some(&json!(true)) {
                return true;
            }
            let Some(basis) = field::<Vec<Word>>(fields, "basis", problems) else {
                return false;
            };
            let graph = fold(&basis);
            let ok = basis.len() == i.rank as usize
                && basis.contains(&i.word)
                && graph.rank() == basis.len()
                && (0..i.rank).all(|j| graph.contains(&Word::generator(j)));
            if !ok {
                problems.push("stored basis does not fold to the ambient free group".into());
            }
            ok
        }
        CommandInput::Express(i) => {
            if fields.get("member") != Some(&json!(true)) {
                return true;
            }
            let basis = field::<Vec<Word>>(fields, "basis", problems);
            let expression = fields.get("expression").and_then(Value::as_str);
            let (Some(basis), Some(expression)) = (basis, expression) else {
                problems.push("member artifact lacks basis or expression".into());
                return false;
            };
            let parsed = Word::parse(&expression.replace('b', "x"));
            let ok = parsed.is_ok_and(|e| substitute_symbols(&e, &basis) == i.word);
            if !ok {
                problems.push("expression does not substitute back to the word".into());
            }
            ok
        }
        CommandInput::CpVerify(_) => {
            let report: Result<CpReport, _> = serde_json::from_value(Value::Object(
                fields
                    .iter()
                    .filter(|(k, _)| !matches!(k.as_str(), "schema" | "command" | "input"))
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect(),
            ));
            match report {
                Ok(report) => {
                    let again = report.reverify();
                    problems.extend(again.problems.iter().cloned());
                    if !again.matches_stored {
                        problems.push(format!(
                            "stored pass {} but the data re-verifies to {}",
                            report.pass, again.pass
                        ));
                    }
                    again.matches_stored
                }
                Err(e) => {
                    problems.push(format!("{name} report: {e}"));
                    false
                }
            }
        }
        CommandInput::Divisibility(_) => {
            let certificate: Result<DivisibilityCertificate, _> =
                serde_json::from_value(json!({
                    "depth": fields.get("depth").cloned().unwrap_or(Value::Null),
                    "entries": fields.get("entries").cloned().unwrap_or(Value::Null),
                }));
            match certificate.map_err(|e| e.to_string()).and_then(|c| {
                c.verify().map_err(|e| e.to_string())
            }) {
                Ok(()) => true,
                Err(e) => {
                    problems.push(format!("divisibility certificate: {e}"));
                    false
                }
            }
        }
        _ => true,
    }
}

impl Outcome {
    pub fn render(&self, name: &str, path: &Path, format: Format) -> String {
        match format {
            Format::Json => {
                let value = json!({
                    "schema": SCHEMA,
                    "command": name,
                    "file": path.display().to_string(),
                    "matches_recomputation": self.matches_recomputation,
                    "verified": self.verified,
                    "problems": self.problems,
                });
                let mut out = serde_json::to_string_pretty(&value).expect("JSON value");
                out.push('\n');
                out
            }
            _ => {
                let mut out = format!(
                    "file: {}\ncommand: {name}\nmatches recomputation: {}\nverified: {}\n",
                    path.display(),
                    self.matches_recomputation,
                    self.verified
                );
                for p in &self.problems {
                    out.push_str(&format!("problem: {p}\n"));
                }
                out
            }
        }
    }
}
