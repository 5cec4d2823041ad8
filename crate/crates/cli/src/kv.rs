//! `key = value` text documents used for manifests, summaries and config files.
//!
//! One entry per line, UTF-8, LF endings. Blank lines and lines starting with
//! `#` are skipped. Keys keep their insertion order.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::CliError;

/// Formats a float with 17 significant digits; `parse::<f64>` restores it exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KvDoc {
    entries: Vec<(String, String)>,
}

impl KvDoc {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: impl Into<String>) {
        self.entries.push((key.to_string(), value.into()));
    }

    pub fn push_f64(&mut self, key: &str, value: f64) {
        self.push(key, fmt_f64(value));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn require(&self, key: &str) -> Result<&str, CliError> {
        self.get(key)
            .ok_or_else(|| CliError::Parse(format!("missing key `{key}`")))
    }

    /// Parses the value under `key`, if present.
    pub fn parse_opt<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| CliError::Parse(format!("bad value `{v}` for key `{key}`")))
            })
            .transpose()
    }

    pub fn parse_req<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        self.parse_opt(key)?
            .ok_or_else(|| CliError::Parse(format!("missing key `{key}`")))
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut doc = Self::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Parse(format!("line {}: expected `key = value`", no + 1))
            })?;
            doc.push(k.trim(), v.trim());
        }
        Ok(doc)
    }

    pub fn render(&self) -> String {
        self.render_prefixed("")
    }

    /// Renders every line with `prefix` in front, e.g. `"# "` for a comment block.
    pub fn render_prefixed(&self, prefix: &str) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{prefix}{k} = {v}");
        }
        out
    }
}
