//! Flat key=value config files: strict parsing, command-line overrides, and
//! typed access. The resolved map (file plus overrides plus defaults) is what
//! lands in the run manifest, rendered so that re-parsing it reproduces the
//! run exactly (floats are printed with Rust's shortest round-trip format).

use crate::{CliError, CliResult};
use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;

#[derive(Debug, Clone, Default)]
pub struct ConfigMap {
    values: BTreeMap<String, String>,
}

impl ConfigMap {
    /// Parses a config file. Full-line comments start with `#`; every other
    /// non-empty line must be `key = value` (whitespace around either part is
    /// ignored). Duplicate keys are rejected so a manifest never hides a
    /// shadowed value.
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, source: &str) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!(
                    "{source}:{}: expected `key = value`, got `{line}`",
                    idx + 1
                ))
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(CliError::Config(format!(
                    "{source}:{}: empty key",
                    idx + 1
                )));
            }
            if values.insert(key.clone(), value).is_some() {
                return Err(CliError::Config(format!(
                    "{source}:{}: duplicate key `{key}`",
                    idx + 1
                )));
            }
        }
        Ok(Self { values })
    }

    /// Applies `--set key=value` overrides; these win over file values.
    pub fn apply_overrides(&mut self, sets: &[String]) -> CliResult<()> {
        for s in sets {
            let (key, value) = s.split_once('=').ok_or_else(|| {
                CliError::Config(format!("--set expects key=value, got `{s}`"))
            })?;
            self.values
                .insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(())
    }

    /// Rejects keys outside the documented schema of the chosen command, so
    /// typos fail loudly instead of being silently ignored.
    pub fn ensure_known(&self, allowed: &[&str]) -> CliResult<()> {
        for key in self.values.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(CliError::Config(format!(
                    "unknown config key `{key}` (allowed: {})",
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn str_or(&self, key: &str, default: &str) -> String {
        self.get_str(key).unwrap_or(default).to_string()
    }

    pub fn require_str(&self, key: &str) -> CliResult<&str> {
        self.get_str(key)
            .ok_or_else(|| CliError::Config(format!("missing required config key `{key}`")))
    }

    fn parse_value<T: std::str::FromStr>(&self, key: &str, value: &str) -> CliResult<T> {
        value.parse().map_err(|_| {
            CliError::Config(format!(
                "config key `{key}`: cannot parse `{value}` as {}",
                std::any::type_name::<T>()
            ))
        })
    }

    pub fn get_f64(&self, key: &str) -> CliResult<Option<f64>> {
        self.get_str(key)
            .map(|v| self.parse_value(key, v))
            .transpose()
    }

    pub fn f64_or(&self, key: &str, default: f64) -> CliResult<f64> {
        Ok(self.get_f64(key)?.unwrap_or(default))
    }

    pub fn get_usize(&self, key: &str) -> CliResult<Option<usize>> {
        self.get_str(key)
            .map(|v| self.parse_value(key, v))
            .transpose()
    }

    pub fn usize_or(&self, key: &str, default: usize) -> CliResult<usize> {
        Ok(self.get_usize(key)?.unwrap_or(default))
    }

    pub fn require_usize(&self, key: &str) -> CliResult<usize> {
        let v = self.require_str(key)?;
        self.parse_value(key, v)
    }
}

/// Accumulates the fully resolved configuration (defaults included) for the
/// manifest and the re-runnable `config.resolved` file.
#[derive(Debug, Default)]
pub struct Resolved {
    values: BTreeMap<String, String>,
}

impl Resolved {
    pub fn put(&mut self, key: &str, value: impl Display) {
        self.values.insert(key.to_string(), value.to_string());
    }

    pub fn map(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    /// Renders as a flat config file that reproduces this run when passed
    /// back through `--config`.
    pub fn render(&self) -> String {
        let mut out = String::from("# resolved configuration (re-runnable)\n");
        for (k, v) in &self.values {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}
