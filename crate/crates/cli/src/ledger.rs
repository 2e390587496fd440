//! Append-only privacy budget ledger stored as JSON lines.

use std::fs::{self, OpenOptions};
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub query_id: String,
    pub epsilon: f64,
    pub delta: f64,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

/// Sequential composition: budgets add up.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Totals {
    pub epsilon: f64,
    pub delta: f64,
}

#[derive(Debug)]
pub struct BudgetLedger {
    path: PathBuf,
    entries: Vec<LedgerEntry>,
}

impl BudgetLedger {
    /// Reads the ledger at `path`; a missing file is an empty ledger.
    pub fn open(path: &Path) -> Result<Self> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == ErrorKind::NotFound => String::new(),
            Err(e) => {
                return Err(e).with_context(|| format!("cannot read ledger {}", path.display()))
            }
        };
        let entries = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                serde_json::from_str(l).with_context(|| {
                    format!("ledger {} line {} is malformed", path.display(), i + 1)
                })
            })
            .collect::<Result<Vec<LedgerEntry>>>()?;
        Ok(Self {
            path: path.to_path_buf(),
            entries,
        })
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn totals(&self) -> Totals {
        self.entries.iter().fold(Totals::default(), |t, e| Totals {
            epsilon: t.epsilon + e.epsilon,
            delta: t.delta + e.delta,
        })
    }

    pub fn append(&mut self, entry: LedgerEntry) -> Result<()> {
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .with_context(|| format!("cannot open ledger {}", self.path.display()))?;
        writeln!(f, "{}", serde_json::to_string(&entry)?)
            .with_context(|| format!("cannot write ledger {}", self.path.display()))?;
        self.entries.push(entry);
        Ok(())
    }
}
