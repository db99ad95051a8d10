//! File emission. CSV floats carry 17 significant digits and lines end in LF,
//! so equal numbers always give equal bytes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::config::Format;
use crate::error::CliError;

pub fn csv_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

/// A CSV table; cells are already formatted.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }

    /// Two-column `key,value` view of a JSON document: nested keys joined by
    /// `.`, array positions as indices, numbers in the fixed float format.
    pub fn flattened(v: &Value) -> Self {
        let mut t = Table::new(&["key", "value"]);
        flatten_into(v, String::new(), &mut t);
        t
    }
}

fn flatten_into(v: &Value, prefix: String, t: &mut Table) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten_into(x, join(k), t)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten_into(x, join(&i.to_string()), t)),
        Value::Number(n) => {
            let cell = match (n.as_i64(), n.as_u64()) {
                (Some(i), _) => i.to_string(),
                (_, Some(u)) => u.to_string(),
                _ => csv_float(n.as_f64().unwrap_or(f64::NAN)),
            };
            t.push(vec![prefix, cell]);
        }
        Value::Null => t.push(vec![prefix, "nan".into()]),
        Value::Bool(b) => t.push(vec![prefix, b.to_string()]),
        Value::String(s) => t.push(vec![prefix, quote(s)]),
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn to_json<T: Serialize>(report: &T) -> Result<Value, CliError> {
    serde_json::to_value(report).map_err(|e| CliError::Io(format!("serializing report: {e}")))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Writes `<stem>.json` or `<stem>.csv` under `dir`. The CSV is `table` when
/// given, else the flattened report.
pub fn emit(dir: &Path, stem: &str, format: Format, report: &Value, table: Option<&Table>) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(format!("{stem}.{}", format.extension()));
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| CliError::Io(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => match table {
            Some(t) => t.render(),
            None => Table::flattened(report).render(),
        },
    };
    write(&path, &text)?;
    Ok(path)
}

/// One line per check for the suite summary.
pub fn summary_line(out: &mut String, cells: &[&str]) {
    let _ = writeln!(out, "{}", cells.iter().map(|c| quote(c)).collect::<Vec<_>>().join(","));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(csv_float(0.1), "1.0000000000000001e-1");
        assert_eq!(csv_float(-2.0), "-2.0000000000000000e0");
        assert_eq!(csv_float(f64::NAN), "nan");
    }

    #[test]
    fn flattening_names_nested_keys() {
        let v = serde_json::json!({"a": {"b": [1.5, 2]}, "ok": true, "s": "x,y"});
        let t = Table::flattened(&v);
        let text = t.render();
        assert!(text.starts_with("key,value\n"));
        assert!(text.contains("a.b.0,1.5000000000000000e0\n"));
        assert!(text.contains("a.b.1,2\n"));
        assert!(text.contains("s,\"x,y\"\n"));
        assert!(!text.contains('\r'));
    }
}
