use std::fmt;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::{Config, Format};

pub const SCHEMA: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input; exit code 2.
    Input(String),
    /// A computation that could not complete, such as an exceeded cap; exit code 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failed(_) => 1,
        }
    }

    pub fn input(path: &Path, e: impl fmt::Display) -> Self {
        CliError::Input(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

pub struct Report {
    pub command: &'static str,
    pub passed: bool,
    pub result: Value,
    pub table: String,
}

impl Report {
    pub fn new(command: &'static str, passed: bool, result: Value, table: String) -> Self {
        Report { command, passed, result, table }
    }

    fn json(&self, c: &Config) -> Value {
        let mut config = Map::new();
        if let Some(f) = c.field {
            config.insert("field".into(), json!(f.to_string()));
        }
        if let Some(n) = c.max_degree {
            config.insert("max_degree".into(), json!(n.to_string()));
        }
        config.insert("hom_bound".into(), json!(c.hom_bound.to_string()));
        config.insert("cap".into(), json!(c.cap.to_string()));
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "seed": c.seed.to_string(),
            "config": config,
            "passed": self.passed,
            "result": self.result,
        })
    }

    /// Writes the report and returns whether it passed.
    pub fn emit(&self, c: &Config) -> Result<bool, CliError> {
        let text = match c.format {
            Format::Json => serde_json::to_string_pretty(&self.json(c)).expect("serializable") + "\n",
            Format::Table => format!("{}seed {}\n{}\n", self.table, c.seed, if self.passed { "PASS" } else { "FAIL" }),
        };
        match &c.out {
            Some(path) => std::fs::write(path, text).map_err(|e| CliError::input(path, e))?,
            None => print!("{text}"),
        }
        Ok(self.passed)
    }
}

pub fn strings<T: ToString>(xs: impl IntoIterator<Item = T>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

/// `[1, 2, 0]` style rendering for tables.
pub fn list<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    format!("[{}]", strings(xs).join(", "))
}
