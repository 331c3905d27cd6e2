//! Pass/fail bookkeeping for the exhaustive identity checks.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub family: String,
    pub instance: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    entries: Vec<Entry>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn record(&mut self, family: &str, instance: impl Into<String>, passed: bool) {
        self.entries.push(Entry {
            family: family.to_string(),
            instance: instance.into(),
            passed,
        });
    }

    /// Records `lhs == rhs`; an error on either side counts as a failure.
    pub fn record_eq<T: PartialEq + fmt::Debug>(
        &mut self,
        family: &str,
        instance: impl Into<String>,
        lhs: Result<T>,
        rhs: Result<T>,
    ) {
        let instance = instance.into();
        match (lhs, rhs) {
            (Ok(a), Ok(b)) => self.record(family, instance, a == b),
            (a, b) => {
                let why = [a.err(), b.err()]
                    .into_iter()
                    .flatten()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join("; ");
                self.record(family, format!("{instance} ({why})"), false)
            }
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    /// `(passed, total)` per family, in family order.
    pub fn coverage(&self) -> BTreeMap<&str, (usize, usize)> {
        let mut out: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for e in &self.entries {
            let slot = out.entry(e.family.as_str()).or_default();
            slot.1 += 1;
            if e.passed {
                slot.0 += 1;
            }
        }
        out
    }
}
