//! Flat `key = value` configuration text with `[section]` headers.
//!
//! ```text
//! # comment
//! [material]
//! mu = 1.0
//! kappa = 0.78
//! ```
//!
//! Every key must be consumed by the reader; leftovers are reported as
//! errors by [`ConfigDoc::finish`].

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigDoc {
    /// Sections in file order, each with its entries in file order.
    sections: Vec<(String, Vec<(String, String)>)>,
    used: RefCell<BTreeSet<(String, String)>>,
}

impl ConfigDoc {
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: Vec<(String, Vec<(String, String)>)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| {
                        Error::Config(format!("line {}: unterminated section header", lineno + 1))
                    })?
                    .trim();
                if name.is_empty() {
                    return Err(Error::Config(format!(
                        "line {}: empty section name",
                        lineno + 1
                    )));
                }
                if sections.iter().any(|(s, _)| s == name) {
                    return Err(Error::Config(format!(
                        "line {}: duplicate section [{name}]",
                        lineno + 1
                    )));
                }
                sections.push((name.to_string(), Vec::new()));
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() {
                return Err(Error::Config(format!("line {}: empty key", lineno + 1)));
            }
            let Some((section, entries)) = sections.last_mut() else {
                return Err(Error::Config(format!(
                    "line {}: key `{key}` outside of any section",
                    lineno + 1
                )));
            };
            if entries.iter().any(|(k, _)| k == key) {
                return Err(Error::Config(format!(
                    "line {}: duplicate key `{key}` in [{section}]",
                    lineno + 1
                )));
            }
            entries.push((key.to_string(), value.to_string()));
        }
        Ok(Self {
            sections,
            used: RefCell::new(BTreeSet::new()),
        })
    }

    pub fn has_section(&self, section: &str) -> bool {
        self.sections.iter().any(|(s, _)| s == section)
    }

    /// Entries of a section in file order; marks them all as consumed.
    pub fn entries(&self, section: &str) -> Vec<(String, String)> {
        let entries = self
            .sections
            .iter()
            .find(|(s, _)| s == section)
            .map(|(_, e)| e.clone())
            .unwrap_or_default();
        let mut used = self.used.borrow_mut();
        for (k, _) in &entries {
            used.insert((section.to_string(), k.clone()));
        }
        entries
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        let value = self
            .sections
            .iter()
            .find(|(s, _)| s == section)?
            .1
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())?;
        self.used
            .borrow_mut()
            .insert((section.to_string(), key.to_string()));
        Some(value)
    }

    pub fn parse_opt<T: FromStr>(&self, section: &str, key: &str) -> Result<Option<T>> {
        match self.get(section, key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::Config(format!("[{section}] {key}: cannot parse `{v}`"))),
        }
    }

    pub fn require<T: FromStr>(&self, section: &str, key: &str) -> Result<T> {
        self.parse_opt(section, key)?
            .ok_or_else(|| Error::Config(format!("[{section}] missing required key `{key}`")))
    }

    pub fn parse_bool(&self, section: &str, key: &str) -> Result<Option<bool>> {
        match self.get(section, key) {
            None => Ok(None),
            Some("true" | "on" | "yes" | "1") => Ok(Some(true)),
            Some("false" | "off" | "no" | "0") => Ok(Some(false)),
            Some(v) => Err(Error::Config(format!(
                "[{section}] {key}: expected a boolean, got `{v}`"
            ))),
        }
    }

    /// Fails if any key in the allowed `sections` or any other section was
    /// never read.
    pub fn finish(&self) -> Result<()> {
        let used = self.used.borrow();
        let unknown: Vec<String> = self
            .sections
            .iter()
            .flat_map(|(s, e)| e.iter().map(move |(k, _)| (s.clone(), k.clone())))
            .filter(|p| !used.contains(p))
            .map(|(s, k)| format!("[{s}] {k}"))
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "unknown keys: {}",
                unknown.join(", ")
            )))
        }
    }
}
