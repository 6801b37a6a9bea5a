//! Periodic label patterns and their verification.
//!
//! A pattern is a finite label block repeated over all of `Z`. Vertex `a`
//! (vertices are numbered from 1, as in the published tables) gets label
//! `labels[(a - 1) mod P]`.
//!
//! Verification is finite and exact: two vertices further apart than
//! `H = k * maxstep` are at distance at least `k + 1`, so they satisfy the
//! radio condition whatever their labels. Checking every pair with its
//! left endpoint in the first period and separation `1..=H` therefore
//! covers every pair in the infinite graph.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::error::{invalid, Error, Result};
use crate::graph::{DistanceFamily, DistanceTable, FamilyKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicPattern {
    pub family: DistanceFamily,
    pub k: u64,
    pub labels: Vec<u64>,
    /// Arithmetic step of the construction; informational only.
    pub step: u64,
}

impl PeriodicPattern {
    pub fn new(family: DistanceFamily, k: u64, labels: Vec<u64>, step: u64) -> Result<Self> {
        if labels.is_empty() {
            return Err(invalid("a pattern needs at least one label"));
        }
        if k == 0 {
            return Err(invalid("k must be >= 1"));
        }
        Ok(Self { family, k, labels, step })
    }

    pub fn period(&self) -> usize {
        self.labels.len()
    }

    pub fn span(&self) -> u64 {
        let max = self.labels.iter().max().copied().unwrap_or(0);
        let min = self.labels.iter().min().copied().unwrap_or(0);
        max - min
    }

    /// Label of vertex `a` (1-based numbering).
    pub fn label_of(&self, a: i64) -> u64 {
        let p = self.labels.len() as i64;
        self.labels[(a - 1).rem_euclid(p) as usize]
    }

    pub fn horizon(&self) -> u64 {
        self.k * self.family.maxstep()
    }
}

/// A pair of vertices breaking the radio condition:
/// `label_gap + dist <= k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub i: i64,
    pub j: i64,
    pub label_gap: u64,
    pub dist: u64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "vertices {} and {}: label gap {} + distance {}",
            self.i, self.j, self.label_gap, self.dist
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(Violation),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

/// The six tabulated constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    /// `D(1..t)`, even `k`: period `tk+3`, step `k`.
    ConsecutiveEvenK,
    /// `D(1..t)`, odd `k`, even `t`: period `tk+1`, step `k+1`.
    ConsecutiveOddKEvenT,
    /// `D(1..t)`, odd `k`, odd `t`: period `tk+1`, step `k+1`.
    ConsecutiveOddKOddT,
    /// `D(1,t)`, odd `k`, odd `t`: period `tk+1`, step `k`.
    OneAndTOddT,
    /// `D(1,t)`, odd `k`, even `t`: period `tk+1`, step `k`.
    OneAndTEvenT,
    /// `D(t-1,t)`, odd `k >= 3`, `t > 2`: period `tk+t+3`, step `k-1`.
    TwoConsecutiveOddK,
}

impl Construction {
    pub fn for_params(kind: FamilyKind, t: u64, k: u64) -> Result<Self> {
        let odd_k = k % 2 == 1;
        let odd_t = t % 2 == 1;
        let c = match kind {
            FamilyKind::Consecutive if !odd_k => Construction::ConsecutiveEvenK,
            FamilyKind::Consecutive if odd_t => Construction::ConsecutiveOddKOddT,
            FamilyKind::Consecutive => Construction::ConsecutiveOddKEvenT,
            FamilyKind::OneAndT if odd_k && odd_t => Construction::OneAndTOddT,
            FamilyKind::OneAndT if odd_k => Construction::OneAndTEvenT,
            FamilyKind::TwoConsecutive if odd_k && k >= 3 && t > 2 => Construction::TwoConsecutiveOddK,
            _ => {
                return Err(Error::NotApplicable(format!(
                    "no tabulated pattern for {kind} with t={t}, k={k}"
                )))
            }
        };
        Ok(c)
    }

    /// `(first block length, second block length, step, second block offset)`.
    fn blocks(self, t: u64, k: u64) -> (u64, u64, u64, u64) {
        match self {
            Construction::ConsecutiveEvenK => (t * k / 2 + 2, t * k / 2 + 1, k, k / 2),
            Construction::ConsecutiveOddKEvenT => {
                let l = k + 1;
                (t * k / 2 + 1, t * k / 2, l, l / 2)
            }
            Construction::ConsecutiveOddKOddT => {
                let l = k + 1;
                ((t * k).div_ceil(2), (t * k).div_ceil(2), l, l / 2)
            }
            Construction::OneAndTOddT => ((t * k).div_ceil(2), (t * k).div_ceil(2), k, (k - 1) / 2),
            Construction::OneAndTEvenT => (t * k / 2 + 1, t * k / 2, k, (k - 1) / 2),
            Construction::TwoConsecutiveOddK => {
                let l = k - 1;
                ((t * k + t + 4) / 2, (t * k + t + 2) / 2, l, l / 2)
            }
        }
    }

    pub fn period(self, t: u64, k: u64) -> u64 {
        match self {
            Construction::ConsecutiveEvenK => t * k + 3,
            Construction::TwoConsecutiveOddK => t * k + t + 3,
            _ => t * k + 1,
        }
    }

    /// The span the matching theorem promises for this construction.
    pub fn theorem_span(self, t: u64, k: u64) -> Result<u64> {
        match self {
            Construction::ConsecutiveEvenK
            | Construction::ConsecutiveOddKEvenT
            | Construction::ConsecutiveOddKOddT => bounds::upper_consecutive(t, k),
            Construction::OneAndTOddT | Construction::OneAndTEvenT => bounds::upper_one_and_t(t, k),
            Construction::TwoConsecutiveOddK => bounds::upper_two_consecutive_oddk(t, k),
        }
    }
}

/// Builds the tabulated two-block arithmetic pattern for `(family, k)`.
pub fn build_pattern(family: &DistanceFamily, k: u64) -> Result<PeriodicPattern> {
    if k == 0 {
        return Err(invalid("k must be >= 1"));
    }
    let t = family.t();
    let construction = Construction::for_params(family.kind(), t, k)?;
    let (first, second, step, offset) = construction.blocks(t, k);
    if first + second != construction.period(t, k) {
        return Err(Error::Conflict(format!(
            "block lengths {first}+{second} do not fill period {}",
            construction.period(t, k)
        )));
    }
    let labels = (0..first)
        .map(|m| m * step)
        .chain((0..second).map(|m| offset + m * step))
        .collect();
    PeriodicPattern::new(family.clone(), k, labels, step)
}

/// Checks the radio condition `|c_i - c_j| + d(i, j) > k` for every pair
/// of vertices of the infinite periodic labeling. On failure returns the
/// lexicographically first violating pair `(i, j)`, `1 <= i <= P`, `i < j`.
pub fn verify_periodic(pattern: &PeriodicPattern) -> Result<Verdict> {
    let horizon = pattern.horizon() as usize;
    let table = DistanceTable::new(&pattern.family, horizon as u64)?;
    let labels = &pattern.labels;
    let p = labels.len();
    let k = pattern.k;
    for i in 0..p {
        let ci = labels[i];
        for delta in 1..=horizon {
            let cj = labels[(i + delta) % p];
            let gap = ci.abs_diff(cj);
            let dist = table.get(delta);
            if gap + dist <= k {
                let a = i as i64 + 1;
                return Ok(Verdict::Reject(Violation {
                    i: a,
                    j: a + delta as i64,
                    label_gap: gap,
                    dist,
                }));
            }
        }
    }
    Ok(Verdict::Accept)
}

/// A verified pattern and its span, which bounds `rl_k` from above.
///
/// Families without a tabulated construction for `k` fall back to the
/// `D(1..t)` pattern: every named family with parameter `t` is a subgraph
/// of `D(1..t)`, so that labeling may still be valid. It is re-verified
/// against the family's own distances either way.
pub fn certified_upper(family: &DistanceFamily, k: u64) -> Result<(u64, PeriodicPattern)> {
    let pattern = match build_pattern(family, k) {
        Ok(p) => p,
        Err(Error::NotApplicable(_)) if family.kind() != FamilyKind::General => {
            let mut p = build_pattern(&DistanceFamily::consecutive(family.t())?, k)?;
            p.family = family.clone();
            p
        }
        Err(e) => return Err(e),
    };
    match verify_periodic(&pattern)? {
        Verdict::Accept => Ok((pattern.span(), pattern)),
        Verdict::Reject(v) => Err(Error::PatternRejected(v)),
    }
}
