//! Append-only text store of refined eigenvalues.
//!
//! One record per line: `problem-id N digits E`. Values are always used in
//! their decimal round-tripped form, so a cache hit and a fresh refinement
//! feed identical numbers downstream.

use std::collections::HashMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rug::Float;

use crate::bigreal::{parse_decimal, to_decimal};
use crate::error::{Error, Result};
use crate::schrodinger::{refine_eigenvalue_with, PotentialSpec, RefineOptions};

/// Decimal digits stored beyond the refinement target.
const STORED_EXTRA: u32 = 10;

type Key = (String, u32, u32);

#[derive(Debug, Default)]
pub struct EigenCache {
    path: Option<PathBuf>,
    entries: Mutex<HashMap<Key, String>>,
}

impl EigenCache {
    pub fn in_memory() -> Self {
        EigenCache::default()
    }

    /// Loads `path` if it exists; new records are appended to it.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = HashMap::new();
        if path.exists() {
            let text = std::fs::read_to_string(&path)?;
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let (key, value) = parse_record(line).ok_or_else(|| {
                    Error::Parse(format!(
                        "{}:{}: malformed cache record",
                        path.display(),
                        i + 1
                    ))
                })?;
                entries.insert(key, value);
            }
        }
        Ok(EigenCache {
            path: Some(path),
            entries: Mutex::new(entries),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lookup(&self, spec: &PotentialSpec, state: u32, digits: u32) -> Option<String> {
        let key = (spec.id(), state, digits);
        self.entries
            .lock()
            .expect("cache lock poisoned")
            .get(&key)
            .cloned()
    }

    /// Eigenvalue `state` at `digits`, from the store or by refinement.
    /// Returns the value and whether it was a hit.
    pub fn energy(
        &self,
        spec: &PotentialSpec,
        state: u32,
        digits: u32,
        options: &RefineOptions,
    ) -> Result<(Float, bool)> {
        let stored = digits + STORED_EXTRA;
        if let Some(text) = self.lookup(spec, state, digits) {
            return Ok((parse_decimal(&text, stored)?, true));
        }
        let eigen = refine_eigenvalue_with(spec, state, digits, options)?;
        let text = to_decimal(&eigen.energy, stored);
        self.insert(spec, state, digits, &text)?;
        Ok((parse_decimal(&text, stored)?, false))
    }

    fn insert(&self, spec: &PotentialSpec, state: u32, digits: u32, value: &str) -> Result<()> {
        let mut entries = self.entries.lock().expect("cache lock poisoned");
        let key = (spec.id(), state, digits);
        if let Some(path) = &self.path {
            let mut file = OpenOptions::new().create(true).append(true).open(path)?;
            writeln!(file, "{} {} {} {}", key.0, state, digits, value)?;
        }
        entries.insert(key, value.to_string());
        Ok(())
    }
}

fn parse_record(line: &str) -> Option<(Key, String)> {
    let mut fields = line.split_whitespace();
    let id = fields.next()?.to_string();
    let state = fields.next()?.parse().ok()?;
    let digits = fields.next()?.parse().ok()?;
    let value = fields.next()?.to_string();
    if fields.next().is_some() || Float::parse(&value).is_err() {
        return None;
    }
    Some(((id, state, digits), value))
}
