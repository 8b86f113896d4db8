//! Flat `key = value` configuration files.
//!
//! Blank lines and `#` comments are skipped. Every key must be consumed by
//! the command reading the file; leftovers are reported as unknown keys.

use crate::error::CliError;
use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

#[derive(Debug, Clone, Default)]
pub struct Config {
    source: String,
    values: BTreeMap<String, String>,
    used: RefCell<BTreeSet<String>>,
}

impl Config {
    pub fn parse(source: &str, text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| CliError::Config {
                origin: source.to_string(),
                reason: format!("line {}: expected key = value, got {raw:?}", i + 1),
            })?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || v.is_empty() {
                return Err(CliError::Config { origin: source.to_string(), reason: format!("line {}: empty key or value", i + 1) });
            }
            if values.insert(k.to_string(), v.to_string()).is_some() {
                return Err(CliError::Config { origin: source.to_string(), reason: format!("line {}: duplicate key {k}", i + 1) });
            }
        }
        Ok(Config { source: source.to_string(), values, used: RefCell::default() })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Read { path: path.display().to_string(), source: e })?;
        Config::parse(&path.display().to_string(), &text)
    }

    /// Applies `other` on top of `self`. Keys in `other` that `self` does not
    /// define are unknown.
    pub fn overlay(mut self, other: &Config) -> Result<Self, CliError> {
        for (k, v) in &other.values {
            if !self.values.contains_key(k) {
                return Err(CliError::UnknownKeys { origin: other.source.clone(), keys: vec![k.clone()] });
            }
            self.values.insert(k.clone(), v.clone());
        }
        Ok(self)
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.used.borrow_mut().insert(key.to_string());
        self.values.get(key).map(String::as_str)
    }

    fn bad(&self, key: &str, v: &str, what: &str) -> CliError {
        CliError::Config { origin: self.source.clone(), reason: format!("{key} = {v:?} is not {what}") }
    }

    pub fn text(&self, key: &str) -> Result<String, CliError> {
        self.raw(key)
            .map(str::to_string)
            .ok_or_else(|| CliError::Config { origin: self.source.clone(), reason: format!("missing key {key}") })
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| self.bad(key, v, "a number")),
        }
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        match self.raw(key) {
            None => Err(CliError::Config { origin: self.source.clone(), reason: format!("missing key {key}") }),
            Some(v) => v.parse().map_err(|_| self.bad(key, v, "a number")),
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| self.bad(key, v, "a non-negative integer")),
        }
    }

    pub fn list(&self, key: &str) -> Result<Vec<f64>, CliError> {
        let v = self.raw(key).ok_or_else(|| CliError::Config { origin: self.source.clone(), reason: format!("missing key {key}") })?;
        v.split(',').map(|s| s.trim().parse().map_err(|_| self.bad(key, v, "a comma-separated list of numbers"))).collect()
    }

    /// Errors if any key was never read.
    pub fn finish(&self) -> Result<(), CliError> {
        let used = self.used.borrow();
        let unknown: Vec<String> = self.values.keys().filter(|k| !used.contains(*k)).cloned().collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(CliError::UnknownKeys { origin: self.source.clone(), keys: unknown })
        }
    }
}
