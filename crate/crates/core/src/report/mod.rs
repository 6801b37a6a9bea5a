//! Grid reports comparing computed bounds against reference values.
//!
//! Flat record schema, shared by the CSV and JSON encodings:
//!
//! `family,t,k,lower,upper,exact,source,ref_lower,ref_upper,ref_exact,ref_source,status,error`
//!
//! `source` is `<lower provenance>/<upper provenance>` with `none` for a
//! missing upper bound. Columns that do not apply to a row are empty
//! (CSV) or `null` (JSON).

mod cache;
mod reference;

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{BoundRecord, LowerProvenance, UpperProvenance};
use crate::error::{invalid, Error, Result};
use crate::graph::{DistanceFamily, FamilyKind};
use crate::search::{exact_value_with, ProofStore, SearchConfig};

pub use cache::{ProofCache, CACHE_ENV, CACHE_FILE, CACHE_VERSION};
pub use reference::{
    load_reference, lookup, parse_reference, reference_table, ReferenceEntry, REFERENCE_CSV, REFERENCE_HEADER,
};

pub const RECORD_HEADER: &str =
    "family,t,k,lower,upper,exact,source,ref_lower,ref_upper,ref_exact,ref_source,status,error";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Match,
    Tighter,
    Looser,
    Conflict,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Match => "match",
            Status::Tighter => "tighter",
            Status::Looser => "looser",
            Status::Conflict => "conflict",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Status::Match, Status::Tighter, Status::Looser, Status::Conflict]
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| invalid(format!("unknown status '{s}'")))
    }
}

/// Conflict when the intervals are disjoint, otherwise compares the
/// computed interval with the reference one. A missing upper bound is
/// treated as unbounded.
pub fn classify(computed: &BoundRecord, reference: &ReferenceEntry) -> Status {
    let upper = computed.upper.unwrap_or(u64::MAX);
    if computed.lower > reference.upper || upper < reference.lower {
        Status::Conflict
    } else if computed.lower == reference.lower && upper == reference.upper {
        Status::Match
    } else if computed.lower >= reference.lower && upper <= reference.upper {
        Status::Tighter
    } else {
        Status::Looser
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridRow {
    pub family: FamilyKind,
    pub t: u64,
    pub k: u64,
    pub reference: Option<ReferenceEntry>,
    pub computed: Option<BoundRecord>,
    pub status: Option<Status>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GridReport {
    pub rows: Vec<GridRow>,
}

/// One row of the flat encoding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridRecord {
    pub family: FamilyKind,
    pub t: u64,
    pub k: u64,
    pub lower: Option<u64>,
    pub upper: Option<u64>,
    pub exact: Option<bool>,
    pub source: Option<String>,
    pub ref_lower: Option<u64>,
    pub ref_upper: Option<u64>,
    pub ref_exact: Option<bool>,
    pub ref_source: Option<String>,
    pub status: Option<Status>,
    pub error: Option<String>,
}

impl GridRow {
    pub fn to_record(&self) -> GridRecord {
        let c = self.computed.as_ref();
        let r = self.reference.as_ref();
        GridRecord {
            family: self.family,
            t: self.t,
            k: self.k,
            lower: c.map(|c| c.lower),
            upper: c.and_then(|c| c.upper),
            exact: c.map(BoundRecord::is_exact),
            source: c.map(|c| {
                format!(
                    "{}/{}",
                    c.lower_provenance.name(),
                    c.upper_provenance.map_or("none", UpperProvenance::name)
                )
            }),
            ref_lower: r.map(|r| r.lower),
            ref_upper: r.map(|r| r.upper),
            ref_exact: r.map(|r| r.exact),
            ref_source: r.map(|r| r.source.clone()),
            status: self.status,
            error: self.error.clone(),
        }
    }

    pub fn from_record(rec: &GridRecord) -> Result<Self> {
        let computed = match (rec.lower, &rec.source) {
            (Some(lower), Some(source)) => {
                let (lp, up) = source
                    .split_once('/')
                    .ok_or_else(|| invalid(format!("malformed source '{source}'")))?;
                let upper_provenance = match up {
                    "none" => None,
                    up => Some(UpperProvenance::parse(up)?),
                };
                if upper_provenance.is_some() != rec.upper.is_some() {
                    return Err(invalid("upper bound and its provenance must both be present"));
                }
                let record = BoundRecord {
                    family: DistanceFamily::named(rec.family, rec.t)?,
                    k: rec.k,
                    lower,
                    upper: rec.upper,
                    lower_provenance: LowerProvenance::parse(lp)?,
                    upper_provenance,
                };
                record.check()?;
                if rec.exact.is_some_and(|e| e != record.is_exact()) {
                    return Err(invalid("'exact' column disagrees with the bounds"));
                }
                Some(record)
            }
            (None, None) => None,
            _ => return Err(invalid("'lower' and 'source' must both be present")),
        };
        let reference = match (rec.ref_lower, rec.ref_upper, rec.ref_exact) {
            (Some(lower), Some(upper), Some(exact)) => Some(ReferenceEntry {
                family: rec.family,
                t: rec.t,
                k: rec.k,
                lower,
                upper,
                exact,
                source: rec.ref_source.clone().unwrap_or_default(),
            }),
            (None, None, None) => None,
            _ => return Err(invalid("reference columns must be all present or all empty")),
        };
        Ok(Self {
            family: rec.family,
            t: rec.t,
            k: rec.k,
            reference,
            computed,
            status: rec.status,
            error: rec.error.clone(),
        })
    }
}

impl GridReport {
    pub fn conflicts(&self) -> usize {
        self.rows.iter().filter(|r| r.status == Some(Status::Conflict)).count()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.rows.is_empty() {
            w.write_record(RECORD_HEADER.split(','))?;
        }
        for row in &self.rows {
            w.serialize(row.to_record())?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let rows = reader
            .deserialize::<GridRecord>()
            .map(|r| GridRow::from_record(&r?))
            .collect::<Result<_>>()?;
        Ok(Self { rows })
    }

    pub fn to_json(&self) -> Result<String> {
        let records: Vec<_> = self.rows.iter().map(GridRow::to_record).collect();
        Ok(serde_json::to_string_pretty(&records)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let records: Vec<GridRecord> = serde_json::from_str(text)?;
        let rows = records.iter().map(GridRow::from_record).collect::<Result<_>>()?;
        Ok(Self { rows })
    }
}

fn run_cell(
    family: FamilyKind,
    t: u64,
    k: u64,
    config: &SearchConfig,
    reference: &[ReferenceEntry],
    store: Option<&dyn ProofStore>,
) -> GridRow {
    let reference = lookup(reference, family, t, k).cloned();
    let computed = DistanceFamily::named(family, t).and_then(|f| exact_value_with(&f, k, config, store));
    let (computed, error) = match computed {
        Ok(c) => (Some(c), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let status = match (&computed, &reference) {
        (Some(c), Some(r)) => Some(classify(c, r)),
        _ => None,
    };
    GridRow { family, t, k, reference, computed, status, error }
}

/// Computes every `(family, t, k)` cell, in parallel, returning rows sorted
/// by family, then `t`, then `k`. Per-cell failures are recorded in the row.
pub fn run_grid(
    families: &[FamilyKind],
    t_range: RangeInclusive<u64>,
    k_range: RangeInclusive<u64>,
    config: &SearchConfig,
    reference: &[ReferenceEntry],
    store: Option<&dyn ProofStore>,
) -> Result<GridReport> {
    config.validate()?;
    if families.contains(&FamilyKind::General) {
        return Err(invalid("the general family has no parameter grid"));
    }
    let mut families = families.to_vec();
    families.sort();
    families.dedup();
    let mut cells = Vec::new();
    for &f in &families {
        for t in t_range.clone() {
            for k in k_range.clone() {
                cells.push((f, t, k));
            }
        }
    }
    let rows = cells
        .into_par_iter()
        .map(|(f, t, k)| run_cell(f, t, k, config, reference, store))
        .collect();
    Ok(GridReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::time::Duration;

    fn entry(lower: u64, upper: u64) -> ReferenceEntry {
        ReferenceEntry {
            family: FamilyKind::Consecutive,
            t: 2,
            k: 2,
            lower,
            upper,
            exact: lower == upper,
            source: "test".into(),
        }
    }

    fn record(lower: u64, upper: Option<u64>) -> BoundRecord {
        BoundRecord {
            family: DistanceFamily::consecutive(2).unwrap(),
            k: 2,
            lower,
            upper,
            lower_provenance: LowerProvenance::AnalyticProposition,
            upper_provenance: upper.map(|_| UpperProvenance::AnalyticTheorem),
        }
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&record(6, Some(6)), &entry(6, 6)), Status::Match);
        assert_eq!(classify(&record(5, Some(8)), &entry(5, 8)), Status::Match);
        assert_eq!(classify(&record(6, Some(7)), &entry(5, 8)), Status::Tighter);
        assert_eq!(classify(&record(4, Some(7)), &entry(5, 8)), Status::Looser);
        assert_eq!(classify(&record(5, None), &entry(5, 8)), Status::Looser);
        assert_eq!(classify(&record(9, Some(10)), &entry(5, 8)), Status::Conflict);
        assert_eq!(classify(&record(2, Some(4)), &entry(5, 8)), Status::Conflict);
    }

    #[test]
    fn small_grid() {
        let config = SearchConfig { time_budget: Duration::from_secs(5), ..SearchConfig::default() };
        let report =
            run_grid(&[FamilyKind::Consecutive], 2..=2, 2..=3, &config, &reference_table(), None).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert_eq!(report.conflicts(), 0);
        let c = report.rows[1].computed.as_ref().unwrap();
        assert_eq!((c.lower, c.upper), (12, Some(12)));
        assert_eq!(report.rows[1].status, Some(Status::Match));
    }

    #[test]
    fn empty_range_gives_empty_report() {
        #[allow(clippy::reversed_empty_ranges)]
        let report = run_grid(
            &[FamilyKind::Consecutive],
            2..=3,
            5..=4,
            &SearchConfig::default(),
            &reference_table(),
            None,
        )
        .unwrap();
        assert!(report.rows.is_empty());
        assert_eq!(report.to_csv().unwrap().trim(), RECORD_HEADER);
        assert_eq!(GridReport::from_csv(&report.to_csv().unwrap()).unwrap(), report);
    }

    #[test]
    fn invalid_cells_become_error_rows() {
        let config = SearchConfig { time_budget: Duration::from_secs(1), ..SearchConfig::default() };
        let report = run_grid(&[FamilyKind::OneAndT], 2..=2, 2..=2, &config, &reference_table(), None).unwrap();
        let row = &report.rows[0];
        assert!(row.computed.is_none() && row.error.is_some() && row.reference.is_some());
        assert_eq!(GridReport::from_json(&report.to_json().unwrap()).unwrap(), report);
    }

    fn arb_row() -> impl Strategy<Value = GridRow> {
        (
            prop::sample::select(vec![FamilyKind::Consecutive, FamilyKind::OneAndT, FamilyKind::TwoConsecutive]),
            3u64..9,
            1u64..9,
            0u64..50,
            prop::option::of(0u64..10),
            prop::option::of((0u64..50, 0u64..10, any::<bool>())),
            any::<bool>(),
            prop::option::of("[a-z ,\"]{1,12}"),
        )
            .prop_map(|(family, t, k, lower, gap, reference, prefix, error)| {
                let computed = BoundRecord {
                    family: DistanceFamily::named(family, t).unwrap(),
                    k,
                    lower,
                    upper: gap.map(|g| lower + g),
                    lower_provenance: if prefix {
                        LowerProvenance::PrefixSearchProof
                    } else {
                        LowerProvenance::AnalyticProposition
                    },
                    upper_provenance: gap.map(|_| UpperProvenance::VerifiedPattern),
                };
                let reference = reference.map(|(lo, gap, exact)| ReferenceEntry {
                    family,
                    t,
                    k,
                    lower: lo,
                    upper: if exact { lo } else { lo + gap },
                    exact,
                    source: "published".into(),
                });
                let status = reference.as_ref().map(|r| classify(&computed, r));
                let computed = error.is_none().then_some(computed);
                let status = if computed.is_some() { status } else { None };
                GridRow { family, t, k, reference, computed, status, error }
            })
    }

    proptest! {
        #[test]
        fn csv_and_json_round_trip(rows in prop::collection::vec(arb_row(), 0..6)) {
            let report = GridReport { rows };
            prop_assert_eq!(&GridReport::from_csv(&report.to_csv().unwrap()).unwrap(), &report);
            prop_assert_eq!(&GridReport::from_json(&report.to_json().unwrap()).unwrap(), &report);
        }
    }
}
