//! Reference values computed offline at 50-digit working precision.
//!
//! The bundled table is `data/golden.json`; `tools/golden_values.py`
//! regenerates it. Each entry records the value as a decimal string and a
//! free-text description of the independent route that produced it.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

const BUNDLED: &str = include_str!("../data/golden.json");

#[derive(Debug, Clone, Deserialize)]
pub struct GoldenEntry {
    pub value: String,
    pub oracle: String,
}

#[derive(Debug, Clone)]
pub struct Golden {
    entries: BTreeMap<String, GoldenEntry>,
}

impl Golden {
    /// The table compiled into the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED).expect("bundled golden table is valid JSON")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let entries: BTreeMap<String, GoldenEntry> =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("golden table: {e}")))?;
        for (name, e) in &entries {
            e.value
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("golden entry {name}: bad value {:?}", e.value)))?;
        }
        Ok(Golden { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn entry(&self, name: &str) -> Option<&GoldenEntry> {
        self.entries.get(name)
    }

    /// Value rounded to binary64.
    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.get(name).and_then(|e| e.value.trim().parse().ok())
    }

    /// Like [`Golden::get`] but panics with the missing name; for tests.
    pub fn value(&self, name: &str) -> f64 {
        self.get(name)
            .unwrap_or_else(|| panic!("golden table has no entry {name:?}"))
    }

    pub fn get_as<T: Real>(&self, name: &str) -> Option<T> {
        self.get(name).map(lit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_table_parses() {
        let g = Golden::bundled();
        assert!(g.len() > 100);
        assert!((g.value("eta_0") - 0.403652637676806).abs() < 1e-15);
        assert!(g.entry("eta_0").unwrap().value.len() >= 30);
        assert!(g.get("no_such_entry").is_none());
    }

    #[test]
    fn every_entry_has_thirty_digits_and_an_oracle() {
        let g = Golden::bundled();
        for name in g.names() {
            let e = g.entry(name).unwrap();
            let digits = e.value.chars().filter(|c| c.is_ascii_digit()).count();
            assert!(digits >= 30, "{name}: {digits} digits");
            assert!(!e.oracle.is_empty(), "{name}");
        }
    }

    #[test]
    fn rejects_malformed_values() {
        let bad = r#"{"x": {"value": "abc", "oracle": "none"}}"#;
        assert!(matches!(Golden::parse(bad), Err(Error::Parse(_))));
    }
}
