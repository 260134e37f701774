//! Append-only record of proven `aw` values, one JSON object per line.
//!
//! Every witness is re-verified when it enters the store, whether from
//! [`Store::put`] or from a file, and two records disagreeing about a value
//! are an error rather than something to merge.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::apcore::{self, Coloring, Kind, Structure};
use crate::error::{Error, Result};
use crate::Color;

/// Environment variable naming the cache file.
pub const CACHE_ENV: &str = "AW_CACHE";
pub const DEFAULT_CACHE: &str = "aw-cache.jsonl";

/// Read access to proven values.
pub trait AwLookup {
    fn lookup(&self, kind: Kind, n: usize, k: usize) -> Option<usize>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "search")]
    Search,
    #[serde(rename = "formula")]
    Formula,
    #[serde(rename = "oracle")]
    Oracle,
    #[serde(rename = "construction+search")]
    ConstructionSearch,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AwRecord {
    pub structure: Kind,
    pub n: usize,
    pub k: usize,
    pub aw: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Color>>,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

impl AwRecord {
    pub fn new(
        s: Structure,
        k: usize,
        aw: usize,
        witness: Option<Coloring>,
        method: Method,
        nodes: Option<u64>,
        seconds: Option<f64>,
    ) -> Self {
        AwRecord {
            structure: s.kind,
            n: s.n,
            k,
            aw,
            witness: witness.map(|c| c.colors().to_vec()),
            method,
            nodes,
            seconds,
        }
    }

    pub fn key(&self) -> (Kind, usize, usize) {
        (self.structure, self.n, self.k)
    }

    pub fn structure(&self) -> Structure {
        Structure::new(self.structure, self.n)
    }

    pub fn witness_coloring(&self) -> Option<Coloring> {
        self.witness.as_ref().and_then(|w| Coloring::new(self.structure(), w.clone()).ok())
    }

    /// Checks the witness: exact with `aw-1` colors and no rainbow `k`-AP.
    pub fn verify(&self) -> std::result::Result<(), String> {
        if self.n == 0 || self.k < 2 || self.aw == 0 {
            return Err("n, k and aw must be positive (k >= 2)".into());
        }
        if let Some(w) = &self.witness {
            let c = Coloring::new(self.structure(), w.clone()).map_err(|e| e.to_string())?;
            apcore::verify_witness(&c, self.k, self.aw - 1).map_err(|e| e.to_string())?;
        }
        Ok(())
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

/// Proven values keyed by `(structure, n, k)`, optionally backed by a file.
#[derive(Debug, Default)]
pub struct Store {
    path: Option<PathBuf>,
    records: BTreeMap<(Kind, usize, usize), AwRecord>,
}

impl Store {
    pub fn in_memory() -> Self {
        Store::default()
    }

    /// Path from `AW_CACHE`, else `./aw-cache.jsonl`.
    pub fn default_path() -> PathBuf {
        std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE))
    }

    /// Loads `path` if it exists; later `put`s append to it.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut store = Store::in_memory();
        if path.exists() {
            store.load_lines(&path)?;
        }
        store.path = Some(path);
        Ok(store)
    }

    /// Parses records from a file without attaching the store to it.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let mut store = Store::in_memory();
        store.load_lines(path.as_ref())?;
        Ok(store)
    }

    fn load_lines(&mut self, path: &Path) -> Result<()> {
        let reader = BufReader::new(File::open(path)?);
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let corrupt = |msg: String| Error::Corrupt { path: path.to_path_buf(), line: i + 1, msg };
            let rec: AwRecord = serde_json::from_str(&line).map_err(|e| corrupt(e.to_string()))?;
            rec.verify().map_err(corrupt)?;
            self.insert(rec)?;
        }
        Ok(())
    }

    // Returns whether the record changed the store.
    fn insert(&mut self, rec: AwRecord) -> Result<bool> {
        match self.records.get_mut(&rec.key()) {
            Some(old) if old.aw != rec.aw => Err(Error::Conflict {
                kind: rec.structure,
                n: rec.n,
                k: rec.k,
                stored: old.aw,
                new: rec.aw,
            }),
            Some(old) => {
                if old.witness.is_none() && rec.witness.is_some() {
                    *old = rec;
                    Ok(true)
                } else {
                    Ok(false)
                }
            }
            None => {
                self.records.insert(rec.key(), rec);
                Ok(true)
            }
        }
    }

    /// Adds a verified record, appending it to the backing file.
    pub fn put(&mut self, rec: AwRecord) -> Result<()> {
        rec.verify().map_err(|msg| Error::PreconditionFailed(format!("record rejected: {msg}")))?;
        let line = rec.to_line();
        if self.insert(rec)? {
            if let Some(path) = &self.path {
                let mut f = OpenOptions::new().create(true).append(true).open(path)?;
                writeln!(f, "{line}")?;
                f.flush()?;
            }
        }
        Ok(())
    }

    pub fn get(&self, kind: Kind, n: usize, k: usize) -> Option<&AwRecord> {
        self.records.get(&(kind, n, k))
    }

    pub fn records(&self) -> impl Iterator<Item = &AwRecord> {
        self.records.values()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// All records in key order, one line each.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for rec in self.records.values() {
            out.push_str(&rec.to_line());
            out.push('\n');
        }
        out
    }

    /// Rewrites `path` with every record in key order.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut f = File::create(path)?;
        f.write_all(self.to_jsonl().as_bytes())?;
        f.flush()?;
        Ok(())
    }
}

impl AwLookup for Store {
    fn lookup(&self, kind: Kind, n: usize, k: usize) -> Option<usize> {
        self.get(kind, n, k).map(|r| r.aw)
    }
}

impl AwLookup for BTreeMap<(Kind, usize, usize), usize> {
    fn lookup(&self, kind: Kind, n: usize, k: usize) -> Option<usize> {
        self.get(&(kind, n, k)).copied()
    }
}
