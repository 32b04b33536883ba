//! Developer identity resolution.
//!
//! A developer is keyed by the lowercased, trimmed email address, falling
//! back to the lowercased, trimmed name when the email is empty. An optional
//! alias map rewrites normalized keys onto canonical ones.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DeveloperIdentity {
    pub key: String,
    pub display_name: String,
    pub email: String,
}

fn normalize(raw: &str) -> String {
    raw.trim().to_lowercase()
}

/// Normalized raw key to canonical key. Chains are collapsed when the map is
/// built, so a lookup is a single hop and resolution is idempotent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AliasMap {
    entries: BTreeMap<String, String>,
}

impl AliasMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a map from (raw, canonical) pairs. Both sides are normalized.
    /// Cycles (a -> b -> a) are rejected.
    pub fn from_pairs<I, S, T>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, T)>,
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let mut raw = BTreeMap::new();
        for (from, to) in pairs {
            let from = normalize(from.as_ref());
            let to = normalize(to.as_ref());
            if from.is_empty() || to.is_empty() {
                return Err(Error::Config("alias map contains an empty key".into()));
            }
            if let Some(prev) = raw.insert(from.clone(), to.clone()) {
                if prev != to {
                    return Err(Error::Config(format!(
                        "alias map maps '{from}' to both '{prev}' and '{to}'"
                    )));
                }
            }
        }

        let mut entries = BTreeMap::new();
        for start in raw.keys() {
            let mut current = start.clone();
            let mut hops = 0usize;
            while let Some(next) = raw.get(&current) {
                if next == &current {
                    break;
                }
                current = next.clone();
                hops += 1;
                if hops > raw.len() {
                    return Err(Error::Config(format!(
                        "alias map contains a cycle through '{start}'"
                    )));
                }
            }
            if &current != start {
                entries.insert(start.clone(), current);
            }
        }
        Ok(Self { entries })
    }

    /// Reads the two-column `raw_key,canonical_key` CSV (header row required).
    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(file);
        let mut pairs = Vec::new();
        for record in reader.records() {
            let record = record?;
            if record.len() != 2 {
                return Err(Error::Config(format!(
                    "{}: alias map rows must have exactly two columns",
                    path.display()
                )));
            }
            pairs.push((record[0].to_string(), record[1].to_string()));
        }
        Self::from_pairs(pairs)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }

    /// Maps a key onto its canonical form. Keys are normalized first.
    pub fn canonical(&self, key: &str) -> String {
        let key = normalize(key);
        match self.entries.get(&key) {
            Some(canonical) => canonical.clone(),
            None => key,
        }
    }
}

/// Resolves a (name, email) pair into a developer identity.
///
/// Fails when both fields are blank; `context` (usually a commit hash) is
/// included in the error so the offending record can be found.
pub fn resolve_identity(
    name: &str,
    email: &str,
    aliases: Option<&AliasMap>,
    context: &str,
) -> Result<DeveloperIdentity> {
    let email_key = normalize(email);
    let key = if !email_key.is_empty() {
        email_key
    } else {
        normalize(name)
    };
    if key.is_empty() {
        return Err(Error::Config(format!(
            "record {context} has neither author name nor email"
        )));
    }
    let key = match aliases {
        Some(map) => map.canonical(&key),
        None => key,
    };
    Ok(DeveloperIdentity {
        key,
        display_name: name.trim().to_string(),
        email: email.trim().to_string(),
    })
}
