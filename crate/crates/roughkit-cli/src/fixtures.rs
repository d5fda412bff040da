//! Bundled fixture corpus and the replay/compare logic behind `verify`.

use serde::Deserialize;
use serde_json::Value;

use crate::{parse_table, run, CliError};

include!(concat!(env!("OUT_DIR"), "/bundled.rs"));

const TOL: f64 = 1e-9;

#[derive(Debug, Clone, Deserialize)]
pub struct Fixture {
    pub id: String,
    pub section: String,
    pub family: String,
    pub model: String,
    /// CSV text, when the model reads a table.
    #[serde(default)]
    pub table: Option<String>,
    pub config: Value,
    pub expect: Value,
}

impl Fixture {
    /// `Err` carries the first mismatch, path-qualified.
    pub fn check(&self) -> Result<(), String> {
        let table = self.table.as_deref().map(parse_table).transpose().map_err(|e| e.to_string())?;
        let report = run(&self.family, &self.model, &self.config, table.as_ref()).map_err(|e| e.to_string())?;
        compare(&self.expect, &report["result"], "result")
    }
}

pub fn parse_fixture(name: &str, text: &str) -> Result<Fixture, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(format!("{name}: line {} column {}: {e}", e.line(), e.column())))
}

pub fn bundled() -> Result<Vec<Fixture>, CliError> {
    if BUNDLED.is_empty() {
        return Err(CliError::Io("fixture corpus is empty".into()));
    }
    BUNDLED.iter().map(|(n, t)| parse_fixture(n, t)).collect()
}

pub fn load_dir(dir: &std::path::Path) -> Result<Vec<Fixture>, CliError> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::Io(format!("no fixtures in {}", dir.display())));
    }
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            parse_fixture(&p.display().to_string(), &text)
        })
        .collect()
}

#[derive(Debug, Default)]
pub struct Summary {
    pub passed: Vec<String>,
    pub failed: Vec<(String, String)>,
}

impl Summary {
    pub fn total(&self) -> usize {
        self.passed.len() + self.failed.len()
    }

    pub fn ok(&self) -> bool {
        self.failed.is_empty()
    }
}

pub fn verify(fixtures: &[Fixture], section: Option<&str>) -> Summary {
    let mut s = Summary::default();
    for f in fixtures.iter().filter(|f| section.map_or(true, |sec| f.section == sec)) {
        match f.check() {
            Ok(()) => s.passed.push(f.id.clone()),
            Err(e) => s.failed.push((f.id.clone(), e)),
        }
    }
    s
}

/// Every key in `expect` must match; lists of names (or of name lists)
/// compare as sets, other lists in order; numbers within `TOL`.
pub fn compare(expect: &Value, actual: &Value, path: &str) -> Result<(), String> {
    let bad = || Err(format!("{path}: expected {expect}, got {actual}"));
    match (expect, actual) {
        (Value::Object(e), Value::Object(a)) => {
            for (k, ev) in e {
                let av = a.get(k).ok_or_else(|| format!("{path}.{k}: missing"))?;
                compare(ev, av, &format!("{path}.{k}"))?;
            }
            Ok(())
        }
        (Value::Array(e), Value::Array(a)) => {
            if e.len() != a.len() {
                return bad();
            }
            if let (Some(es), Some(as_)) = (as_set(e), as_set(a)) {
                return if es == as_ { Ok(()) } else { bad() };
            }
            for (i, (ev, av)) in e.iter().zip(a).enumerate() {
                compare(ev, av, &format!("{path}[{i}]"))?;
            }
            Ok(())
        }
        (Value::Number(e), Value::Number(a)) => {
            let (e, a) = (e.as_f64().unwrap_or(f64::NAN), a.as_f64().unwrap_or(f64::NAN));
            if (e - a).abs() <= TOL {
                Ok(())
            } else {
                bad()
            }
        }
        _ if expect == actual => Ok(()),
        _ => bad(),
    }
}

fn names(v: &[Value]) -> Option<Vec<String>> {
    let mut out: Vec<String> = v.iter().map(|x| x.as_str().map(str::to_string)).collect::<Option<_>>()?;
    out.sort();
    Some(out)
}

fn as_set(v: &[Value]) -> Option<Vec<Vec<String>>> {
    if let Some(n) = names(v) {
        return Some(n.into_iter().map(|s| vec![s]).collect());
    }
    let mut out: Vec<Vec<String>> = v.iter().map(|x| x.as_array().and_then(|a| names(a))).collect::<Option<_>>()?;
    out.sort();
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn name_lists_ignore_order() {
        assert!(compare(&json!(["b", "a"]), &json!(["a", "b"]), "r").is_ok());
        assert!(compare(&json!([["b"], ["a", "c"]]), &json!([["c", "a"], ["b"]]), "r").is_ok());
        assert!(compare(&json!(["a"]), &json!(["a", "b"]), "r").is_err());
    }

    #[test]
    fn numbers_within_tolerance() {
        assert!(compare(&json!({"x": 0.3}), &json!({"x": 0.30000000000000004, "y": 1}), "r").is_ok());
        assert!(compare(&json!([0.3, 0.1]), &json!([0.1, 0.3]), "r").is_err());
    }

    #[test]
    fn missing_key_is_named() {
        let e = compare(&json!({"lower": []}), &json!({}), "result").unwrap_err();
        assert!(e.contains("result.lower"));
    }
}
