//! Append-only result cache, one JSON record per line.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::row::SurveyRow;
use crate::error::Result;
use crate::tangent::ParameterCell;

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub k: usize,
    pub n: usize,
    pub d: usize,
    pub s: usize,
    pub primes: Vec<u64>,
    pub seed: u64,
    pub trials: usize,
    pub version: String,
}

impl CacheKey {
    pub fn new(cell: &ParameterCell, primes: &[u64], seed: u64, trials: usize) -> Self {
        Self {
            k: cell.k,
            n: cell.n,
            d: cell.d,
            s: cell.s,
            primes: primes.to_vec(),
            seed,
            trials,
            version: CODE_VERSION.to_string(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Record {
    key: CacheKey,
    row: SurveyRow,
}

#[derive(Debug, Default)]
pub struct ResultCache {
    path: Option<PathBuf>,
    entries: HashMap<CacheKey, SurveyRow>,
}

impl ResultCache {
    /// Loads `path` if it exists; unreadable lines are ignored.
    pub fn open(path: &Path) -> Result<Self> {
        let mut entries = HashMap::new();
        if path.exists() {
            for line in BufReader::new(File::open(path)?).lines() {
                if let Ok(rec) = serde_json::from_str::<Record>(&line?) {
                    entries.insert(rec.key, rec.row);
                }
            }
        }
        Ok(Self {
            path: Some(path.to_path_buf()),
            entries,
        })
    }

    pub fn get(&self, key: &CacheKey) -> Option<&SurveyRow> {
        self.entries.get(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Records new results and appends them to the backing file.
    pub fn extend(&mut self, fresh: Vec<(CacheKey, SurveyRow)>) -> Result<()> {
        if fresh.is_empty() {
            return Ok(());
        }
        if let Some(path) = &self.path {
            let mut file = OpenOptions::new().create(true).append(true).open(path)?;
            for (key, row) in &fresh {
                let line = serde_json::to_string(&Record {
                    key: key.clone(),
                    row: row.clone(),
                })
                .map_err(|e| crate::error::Error::Io(e.to_string()))?;
                writeln!(file, "{line}")?;
            }
        }
        self.entries.extend(fresh);
        Ok(())
    }
}
