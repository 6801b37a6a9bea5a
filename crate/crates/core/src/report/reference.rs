use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::FamilyKind;

/// Published values and bounds for `t, k` in `2..=9`, one row per cell.
/// Exact (bold) cells have `lower == upper` and `exact == true`.
pub const REFERENCE_CSV: &str = include_str!("../../data/reference.csv");

pub const REFERENCE_HEADER: &str = "family,t,k,lower,upper,exact,source";

/// One reference cell. Keyed by family kind and `t` rather than a
/// validated family: the `D(1,t)` table includes `t = 2` (which is `D(1,2)`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceEntry {
    pub family: FamilyKind,
    pub t: u64,
    pub k: u64,
    pub lower: u64,
    pub upper: u64,
    pub exact: bool,
    pub source: String,
}

impl ReferenceEntry {
    fn check(&self) -> Result<()> {
        if self.lower > self.upper {
            return Err(invalid(format!("reference {} t={} k={}: lower > upper", self.family, self.t, self.k)));
        }
        if self.exact && self.lower != self.upper {
            return Err(invalid(format!(
                "reference {} t={} k={}: exact entry with lower != upper",
                self.family, self.t, self.k
            )));
        }
        Ok(())
    }
}

pub fn parse_reference(text: &str) -> Result<Vec<ReferenceEntry>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != REFERENCE_HEADER {
        return Err(invalid(format!("reference header must be '{REFERENCE_HEADER}'")));
    }
    let mut out = Vec::new();
    for row in reader.deserialize() {
        let entry: ReferenceEntry = row?;
        entry.check()?;
        out.push(entry);
    }
    Ok(out)
}

/// The embedded reference tables.
pub fn reference_table() -> Vec<ReferenceEntry> {
    parse_reference(REFERENCE_CSV).expect("embedded reference data is valid")
}

pub fn load_reference(path: &Path) -> Result<Vec<ReferenceEntry>> {
    parse_reference(&std::fs::read_to_string(path)?)
}

pub fn lookup(table: &[ReferenceEntry], family: FamilyKind, t: u64, k: u64) -> Option<&ReferenceEntry> {
    table.iter().find(|e| e.family == family && e.t == t && e.k == k)
}
