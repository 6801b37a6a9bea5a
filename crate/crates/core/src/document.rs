//! The JSON document shared by pattern files and proof certificates.
//!
//! ```json
//! {"family": "one-and-t", "t": 3, "k": 3, "period": 10,
//!  "labels": [0, 3, 6, 9, 12, 1, 4, 7, 10, 13], "step": 3}
//! ```
//!
//! `family`, `t`, `k` and `labels` are always present. `dset` is present
//! for general families. Patterns carry `period`; certificates carry
//! `verdict`, `l`, `prefix`, `nodes` and `elapsed_ms`, with the witness
//! labeling (if any) in `labels`. Verifier output adds `verdict` and, on
//! rejection, `violation`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{DistanceFamily, FamilyKind};
use crate::pattern::{PeriodicPattern, Verdict, Violation};
use crate::search::{InconclusiveReason, ProofCertificate, ProofOutcome};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub family: Option<FamilyKind>,
    pub t: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dset: Option<Vec<u64>>,
    pub k: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    #[serde(default)]
    pub labels: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<Violation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefix: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

fn family_fields(family: &DistanceFamily) -> (Option<FamilyKind>, u64, Option<Vec<u64>>) {
    let dset = (family.kind() == FamilyKind::General).then(|| family.dset().to_vec());
    (Some(family.kind()), family.t(), dset)
}

impl Document {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn family(&self) -> Result<DistanceFamily> {
        match (self.family, &self.dset) {
            (Some(FamilyKind::General), Some(dset)) => DistanceFamily::general(dset.clone()),
            (Some(FamilyKind::General), None) => Err(invalid("general family needs 'dset'")),
            (Some(kind), _) => DistanceFamily::named(kind, self.t),
            (None, _) => Err(invalid("document has no 'family'")),
        }
    }

    pub fn from_pattern(p: &PeriodicPattern) -> Self {
        let (family, t, dset) = family_fields(&p.family);
        Self {
            family,
            t,
            dset,
            k: p.k,
            period: Some(p.period()),
            labels: p.labels.clone(),
            step: Some(p.step),
            ..Self::default()
        }
    }

    pub fn to_pattern(&self) -> Result<PeriodicPattern> {
        if let Some(period) = self.period {
            if period != self.labels.len() {
                return Err(invalid(format!(
                    "period {period} does not match {} labels",
                    self.labels.len()
                )));
            }
        }
        PeriodicPattern::new(self.family()?, self.k, self.labels.clone(), self.step.unwrap_or(0))
    }

    pub fn with_verdict(mut self, verdict: &Verdict) -> Self {
        match verdict {
            Verdict::Accept => self.verdict = Some("accept".into()),
            Verdict::Reject(v) => {
                self.verdict = Some("reject".into());
                self.violation = Some(*v);
            }
        }
        self
    }

    pub fn from_certificate(c: &ProofCertificate) -> Self {
        let (family, t, dset) = family_fields(&c.family);
        let (verdict, prefix, labels) = match &c.outcome {
            ProofOutcome::ProvenGreaterThan { prefix, .. } => ("proven-greater-than", *prefix, Vec::new()),
            ProofOutcome::Inconclusive { reason, witness } => (
                match reason {
                    InconclusiveReason::WitnessFound => "witness-found",
                    InconclusiveReason::BudgetExhausted => "budget-exhausted",
                },
                c.max_prefix,
                witness.clone().unwrap_or_default(),
            ),
        };
        Self {
            family,
            t,
            dset,
            k: c.k,
            labels,
            verdict: Some(verdict.into()),
            l: Some(c.l),
            prefix: Some(prefix),
            nodes: Some(c.nodes),
            elapsed_ms: Some(c.elapsed.as_millis() as u64),
            ..Self::default()
        }
    }

    /// Recovers the proof outcome recorded in a certificate document.
    pub fn outcome(&self) -> Result<ProofOutcome> {
        let l = self.l.ok_or_else(|| invalid("certificate has no 'l'"))?;
        match self.verdict.as_deref() {
            Some("proven-greater-than") => Ok(ProofOutcome::ProvenGreaterThan {
                l,
                prefix: self.prefix.ok_or_else(|| invalid("certificate has no 'prefix'"))?,
            }),
            Some("witness-found") => Ok(ProofOutcome::Inconclusive {
                reason: InconclusiveReason::WitnessFound,
                witness: Some(self.labels.clone()),
            }),
            Some("budget-exhausted") => Ok(ProofOutcome::Inconclusive {
                reason: InconclusiveReason::BudgetExhausted,
                witness: None,
            }),
            other => Err(invalid(format!("unknown certificate verdict {other:?}"))),
        }
    }
}
