//! Batch front end: ingest tables and configs, run a model, replay fixtures.

mod ctx;
pub mod fixtures;
mod models;

use std::path::Path;

use roughkit_core::{InformationTable, Universe, Value as Cell};
use serde_json::{json, Value};

pub use ctx::Ctx;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] roughkit_core::Error),
    #[error("io error: {0}")]
    Io(String),
}

impl CliError {
    /// 1 usage/parse, 2 model precondition.
    pub fn exit_code(&self) -> i32 {
        use roughkit_core::Error as E;
        match self {
            CliError::Core(E::Precondition(_) | E::Guard(_) | E::InvalidParameter(_)) => 2,
            _ => 1,
        }
    }
}

pub const FAMILIES: &[&str] = &["approx", "decision", "multiview", "hyper", "valued", "structures"];

/// CSV with a header row; the first column names the elements.
pub fn parse_table(text: &str) -> Result<InformationTable, CliError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| CliError::Parse(e.to_string()))?.clone();
    if header.is_empty() {
        return Err(CliError::Parse("table header is empty".into()));
    }
    let attrs: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut ids = Vec::new();
    let mut cells = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let at = e.position().map(|p| format!("line {}: ", p.line())).unwrap_or_default();
            CliError::Parse(format!("{at}{e}"))
        })?;
        ids.push(rec[0].to_string());
        cells.push(rec.iter().skip(1).map(Cell::parse).collect());
    }
    Ok(InformationTable::new(Universe::new(ids)?, attrs, cells)?)
}

pub fn parse_json(text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
}

pub enum Ingested {
    Table(InformationTable),
    Json(Value),
}

pub fn ingest(path: &Path, format: &str) -> Result<Ingested, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    match format {
        "csv" => parse_table(&text).map(Ingested::Table),
        "json" => parse_json(&text).map(Ingested::Json),
        other => Err(CliError::Usage(format!("unknown input format `{other}`"))),
    }
}

/// Shape of what was loaded; covering descriptors are validated as granule families.
pub fn describe(ing: &Ingested) -> Result<Value, CliError> {
    match ing {
        Ingested::Table(t) => Ok(json!({
            "kind": "table",
            "rows": t.universe().len(),
            "universe": t.universe().ids(),
            "attributes": t.attrs(),
        })),
        Ingested::Json(v) => {
            let c = Ctx::new(v, None)?;
            match c.opt("covering") {
                Some(cov) => {
                    let fam = roughkit_core::granulation::GranuleFamily::new(c.n(), c.names.blocks(cov)?)?;
                    Ok(json!({"kind": "covering", "granules": fam.blocks().len(), "is_covering": fam.is_covering()}))
                }
                None => Ok(json!({"kind": "config", "keys": v.as_object().map(|o| o.keys().cloned().collect::<Vec<_>>())})),
            }
        }
    }
}

/// `a,b,c` as an element list, or `attr=value` against the table.
pub fn parse_target_spec(spec: &str) -> Value {
    match spec.split_once('=') {
        Some((a, v)) => json!({"attr": a.trim(), "value": v.trim()}),
        None => Value::from(
            spec.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_string).collect::<Vec<_>>(),
        ),
    }
}

/// Dispatch to the named model and wrap its payload in a report.
pub fn run(family: &str, model: &str, config: &Value, table: Option<&InformationTable>) -> Result<Value, CliError> {
    let ctx = Ctx::new(config, table)?;
    let result = match family {
        "approx" => models::approx::run(model, &ctx)?,
        "decision" => models::decision::run(model, &ctx)?,
        "multiview" => models::multiview::run(model, &ctx)?,
        "hyper" => models::hyper::run(model, &ctx)?,
        "valued" => models::valued::run(model, &ctx)?,
        "structures" => models::structures::run(model, &ctx)?,
        other => return Err(CliError::Usage(format!("unknown family `{other}`"))),
    };
    Ok(json!({
        "family": family,
        "model": model,
        "config": config,
        "result": result,
    }))
}

pub(crate) fn unknown_model(family: &str, model: &str) -> CliError {
    CliError::Usage(format!("unknown {family} model `{model}`"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_errors_name_the_line() {
        let e = parse_table("id,a\nx,1\ny,1,2\n").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
    }

    #[test]
    fn header_only_table_is_empty() {
        let t = parse_table("id,a,b\n").unwrap();
        assert_eq!(t.universe().len(), 0);
        assert_eq!(t.attrs(), ["a", "b"]);
    }

    #[test]
    fn target_specs() {
        assert_eq!(parse_target_spec("a, b,"), json!(["a", "b"]));
        assert_eq!(parse_target_spec("D = Flu"), json!({"attr": "D", "value": "Flu"}));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        assert_eq!(CliError::Core(roughkit_core::Error::Precondition("x".into())).exit_code(), 2);
    }
}
