use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Result;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Self { name: name.into(), passed, detail: None }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// One output row. Exact values are `"p/q"` strings, keyed by the pipeline
/// (or column) that produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub key: BTreeMap<String, Value>,
    pub values: BTreeMap<String, String>,
    pub checks: Vec<Check>,
}

impl Row {
    pub fn new(key: BTreeMap<String, Value>) -> Self {
        Self { key, values: BTreeMap::new(), checks: Vec::new() }
    }

    pub fn describe_key(&self) -> String {
        let parts: Vec<String> = self.key.iter().map(|(k, v)| format!("{k}={}", key_text(v))).collect();
        parts.join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<u64>,
    pub passed: bool,
    pub rows: Vec<Row>,
}

impl Report {
    pub fn new(command: &str, rows: Vec<Row>, timestamp: bool) -> Self {
        let generated_at =
            timestamp.then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
        let passed = rows.iter().all(|r| r.checks.iter().all(|c| c.passed));
        Self { command: command.into(), generated_at, passed, rows }
    }

    /// The first failing check, as `(row, check)`.
    pub fn first_failure(&self) -> Option<(&Row, &Check)> {
        self.rows.iter().find_map(|r| r.checks.iter().find(|c| !c.passed).map(|c| (r, c)))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Long format: the key columns, then `item,value,detail`. Values appear
    /// under their pipeline name, checks as `check:<name>` with `pass`/`fail`.
    /// The timestamp, when enabled, is a leading `#` comment line.
    pub fn to_csv(&self) -> Result<String> {
        let columns: Vec<String> = {
            let mut names: Vec<&String> = self.rows.iter().flat_map(|r| r.key.keys()).collect();
            names.sort();
            names.dedup();
            names.into_iter().cloned().collect()
        };
        let mut out = String::new();
        if let Some(t) = self.generated_at {
            out.push_str(&format!("# generated_at={t}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = columns.clone();
        header.extend(["item", "value", "detail"].map(String::from));
        w.write_record(&header)?;
        for row in &self.rows {
            let key: Vec<String> = columns.iter().map(|c| row.key.get(c).map(key_text).unwrap_or_default()).collect();
            for (item, value) in &row.values {
                w.write_record(key.iter().cloned().chain([item.clone(), value.clone(), String::new()]))?;
            }
            for c in &row.checks {
                let status = if c.passed { "pass" } else { "fail" };
                w.write_record(key.iter().cloned().chain([
                    format!("check:{}", c.name),
                    status.to_string(),
                    c.detail.clone().unwrap_or_default(),
                ]))?;
            }
        }
        out.push_str(std::str::from_utf8(&w.into_inner()?)?);
        Ok(out)
    }
}

/// Text form of a key field in CSV: numbers as is, lists space separated.
pub fn key_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(key_text).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}
