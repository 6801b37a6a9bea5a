//! Closed-form lower and upper bounds on `rl_k` for the three named
//! families, plus the upper traceable number machinery behind the lower
//! bounds.
//!
//! Every formula is evaluated over exact rationals. Lower bounds are
//! rounded up (spans are integers); upper bounds are asserted integral.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{DistanceFamily, FamilyKind};

/// Exact rational value of a bound before integer rounding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalBound(Ratio<i128>);

impl RationalBound {
    pub fn new(numerator: i128, denominator: i128) -> Result<Self> {
        if denominator <= 0 {
            return Err(invalid(format!("denominator must be positive, got {denominator}")));
        }
        Ok(Self(Ratio::new(numerator, denominator)))
    }

    pub fn integer(n: i128) -> Self {
        Self(Ratio::from_integer(n))
    }

    pub fn numerator(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denominator(&self) -> i128 {
        *self.0.denom()
    }

    pub fn ceil(&self) -> i128 {
        self.0.ceil().to_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.numerator() > 0
    }

    pub fn to_integer(&self) -> Result<i128> {
        if self.0.is_integer() {
            Ok(self.0.to_integer())
        } else {
            Err(Error::NotIntegral(self.to_string()))
        }
    }

    pub fn as_ratio(&self) -> Ratio<i128> {
        self.0
    }

    pub fn from_ratio(r: Ratio<i128>) -> Self {
        Self(r)
    }
}

impl fmt::Display for RationalBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn r(n: i128) -> Ratio<i128> {
    Ratio::from_integer(n)
}

fn q(n: i128, d: i128) -> Ratio<i128> {
    Ratio::new(n, d)
}

fn ceil_clamped(x: Ratio<i128>) -> u64 {
    x.ceil().to_integer().max(0) as u64
}

fn integral(x: Ratio<i128>) -> Result<u64> {
    let v = RationalBound(x).to_integer()?;
    u64::try_from(v).map_err(|_| Error::NotIntegral(format!("{x} is negative")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowerProvenance {
    AnalyticProposition,
    PrefixSearchProof,
    ReferenceTable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpperProvenance {
    AnalyticTheorem,
    VerifiedPattern,
    ReferenceTable,
}

impl LowerProvenance {
    pub fn name(self) -> &'static str {
        match self {
            LowerProvenance::AnalyticProposition => "analytic-proposition",
            LowerProvenance::PrefixSearchProof => "prefix-search-proof",
            LowerProvenance::ReferenceTable => "reference-table",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        [Self::AnalyticProposition, Self::PrefixSearchProof, Self::ReferenceTable]
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| invalid(format!("unknown lower provenance '{s}'")))
    }
}

impl UpperProvenance {
    pub fn name(self) -> &'static str {
        match self {
            UpperProvenance::AnalyticTheorem => "analytic-theorem",
            UpperProvenance::VerifiedPattern => "verified-pattern",
            UpperProvenance::ReferenceTable => "reference-table",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        [Self::AnalyticTheorem, Self::VerifiedPattern, Self::ReferenceTable]
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| invalid(format!("unknown upper provenance '{s}'")))
    }
}

/// A lower/upper pair on `rl_k` for one family, with where each side came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundRecord {
    pub family: DistanceFamily,
    pub k: u64,
    pub lower: u64,
    pub upper: Option<u64>,
    pub lower_provenance: LowerProvenance,
    pub upper_provenance: Option<UpperProvenance>,
}

impl BoundRecord {
    pub fn is_exact(&self) -> bool {
        self.upper == Some(self.lower)
    }

    pub fn check(&self) -> Result<()> {
        match self.upper {
            Some(u) if u < self.lower => Err(Error::Conflict(format!(
                "lower bound {} exceeds upper bound {u} for {} k={}",
                self.lower, self.family, self.k
            ))),
            _ => Ok(()),
        }
    }
}

/// Upper traceable number of the path on `n` vertices.
pub fn t_plus_path(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(invalid(format!("path needs n >= 2, got {n}")));
    }
    Ok(if n.is_multiple_of(2) { n * n / 2 - 1 } else { (n * n - 1) / 2 - 1 })
}

/// `(n^2/2 + alpha (n-1) - 1) / beta`: upper bound on `t+` of an `n`-vertex
/// graph on `0..n` whose distances satisfy `d(i,j) <= (j - i + alpha) / beta`.
/// The distance hypothesis is the caller's responsibility.
pub fn le1_traceable_upper(n: u64, alpha: RationalBound, beta: RationalBound) -> Result<RationalBound> {
    if n < 2 {
        return Err(invalid(format!("n must be >= 2, got {n}")));
    }
    if !alpha.is_positive() || !beta.is_positive() {
        return Err(invalid("alpha and beta must be positive"));
    }
    let n = n as i128;
    let value = (q(n * n, 2) + alpha.0 * r(n - 1) - r(1)) / beta.0;
    Ok(RationalBound(value))
}

/// `(alpha, beta)` under which each named family satisfies the distance
/// hypothesis of [`le1_traceable_upper`].
pub fn traceable_alpha_beta(family: &DistanceFamily) -> Result<(RationalBound, RationalBound)> {
    let t = family.t() as i128;
    let beta = RationalBound::integer(t);
    let alpha = match family.kind() {
        FamilyKind::Consecutive => RationalBound::integer(t - 1),
        FamilyKind::OneAndT => RationalBound::new(t * t - 1, 2)?,
        FamilyKind::TwoConsecutive => RationalBound::integer(t * t),
        FamilyKind::General => {
            return Err(Error::NotApplicable(format!("no traceable bound for {family}")))
        }
    };
    Ok((alpha, beta))
}

/// `(n-1)(k+1) - t+`. May be negative, in which case it says nothing.
pub fn th1_lower(k: u64, n: u64, t_plus: u64) -> i64 {
    (n as i64 - 1) * (k as i64 + 1) - t_plus as i64
}

fn check_k(k: u64) -> Result<()> {
    if k == 0 {
        Err(invalid("k must be >= 1"))
    } else {
        Ok(())
    }
}

/// Unrounded lower bound `t/2 k^2 + 1/(2t)` for `D(1, ..., t)`.
pub fn lower_consecutive_exact(t: u64, k: u64) -> Result<RationalBound> {
    if t < 2 {
        return Err(invalid(format!("t must be >= 2, got {t}")));
    }
    check_k(k)?;
    let (t, k) = (t as i128, k as i128);
    Ok(RationalBound(q(t, 2) * r(k * k) + q(1, 2 * t)))
}

pub fn lower_consecutive(t: u64, k: u64) -> Result<u64> {
    Ok(ceil_clamped(lower_consecutive_exact(t, k)?.0))
}

/// Unrounded lower bound for `D(1, t)`, valid for `t >= 3` and `k >= t/2`.
pub fn lower_one_and_t_exact(t: u64, k: u64) -> Result<RationalBound> {
    if t < 3 {
        return Err(invalid(format!("t must be >= 3, got {t}")));
    }
    check_k(k)?;
    if 2 * k < t {
        return Err(Error::NotApplicable(format!("D(1,t) lower bound needs k >= t/2 (t={t}, k={k})")));
    }
    let (t, k) = (t as i128, k as i128);
    let p = q(t * t, 2) - r(t) + q(1, 2);
    let qq = q(t * t * t, 8) - q(t * t, 2) + q(3 * t, 4) - q(1, 2);
    Ok(RationalBound(q(t, 2) * r(k * k) - p * r(k) + qq + q(1, 2 * t)))
}

pub fn lower_one_and_t(t: u64, k: u64) -> Result<u64> {
    Ok(ceil_clamped(lower_one_and_t_exact(t, k)?.0))
}

/// Unrounded lower bound for `D(t-1, t)`, valid for `t >= 3` and `k >= t`.
pub fn lower_two_consecutive_exact(t: u64, k: u64) -> Result<RationalBound> {
    if t < 3 {
        return Err(invalid(format!("t must be >= 3, got {t}")));
    }
    check_k(k)?;
    if k < t {
        return Err(Error::NotApplicable(format!("D(t-1,t) lower bound needs k >= t (t={t}, k={k})")));
    }
    let (t, k) = (t as i128, k as i128);
    let p = r(t * t - t + 1);
    let qq = q(t * t * t, 2) - r(t * t) + q(3 * t, 2) - r(1);
    Ok(RationalBound(q(t, 2) * r(k * k) - p * r(k) + qq + q(1, t)))
}

pub fn lower_two_consecutive(t: u64, k: u64) -> Result<u64> {
    Ok(ceil_clamped(lower_two_consecutive_exact(t, k)?.0))
}

/// Upper bound for `D(1, ..., t)` realized by the periodic patterns:
/// `t/2 k^2 + k` for even `k`, `t/2 k^2 + t/2 k` for odd `k`.
pub fn upper_consecutive(t: u64, k: u64) -> Result<u64> {
    if t < 2 {
        return Err(invalid(format!("t must be >= 2, got {t}")));
    }
    check_k(k)?;
    let (t, k) = (t as i128, k as i128);
    let base = q(t, 2) * r(k * k);
    integral(if k % 2 == 0 { base + r(k) } else { base + q(t, 2) * r(k) })
}

/// Upper bound for `D(1, t)` with odd `k`: `t/2 k^2 - 1/2` (odd `t`) or
/// `t/2 k^2` (even `t`).
pub fn upper_one_and_t(t: u64, k: u64) -> Result<u64> {
    if t < 3 {
        return Err(invalid(format!("t must be >= 3, got {t}")));
    }
    check_k(k)?;
    if k.is_multiple_of(2) {
        return Err(Error::NotApplicable(format!("no D(1,t) upper bound for even k={k}")));
    }
    let (t, k) = (t as i128, k as i128);
    let base = q(t, 2) * r(k * k);
    integral(if t % 2 == 1 { base - q(1, 2) } else { base })
}

/// Upper bound `t/2 k^2 + k - (t+2)/2` for `D(t-1, t)`, `t > 2`, odd `k >= 3`.
pub fn upper_two_consecutive_oddk(t: u64, k: u64) -> Result<u64> {
    if t <= 2 {
        return Err(invalid(format!("t must be > 2, got {t}")));
    }
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::NotApplicable(format!("D(t-1,t) upper bound needs odd k >= 3, got {k}")));
    }
    let (t, k) = (t as i128, k as i128);
    integral(q(t, 2) * r(k * k) + r(k) - q(t + 2, 2))
}

/// Best analytic bounds for a named family: the largest applicable lower
/// bound and the smallest applicable upper bound.
///
/// A single edge already forces `rl_k >= k` (the edge case of the
/// traceable-number bound), which serves as the floor when no proposition
/// covers `k`.
pub fn best_bounds(family: &DistanceFamily, k: u64) -> Result<BoundRecord> {
    check_k(k)?;
    let t = family.t();
    let (lowers, uppers): (Vec<Result<u64>>, Vec<Result<u64>>) = match family.kind() {
        FamilyKind::Consecutive => (vec![lower_consecutive(t, k)], vec![upper_consecutive(t, k)]),
        FamilyKind::OneAndT => (
            vec![lower_one_and_t(t, k)],
            vec![upper_consecutive(t, k), upper_one_and_t(t, k)],
        ),
        FamilyKind::TwoConsecutive => (
            vec![lower_two_consecutive(t, k)],
            vec![upper_consecutive(t, k), upper_two_consecutive_oddk(t, k)],
        ),
        FamilyKind::General => {
            return Err(Error::NotApplicable(format!("no analytic bounds for {family}")))
        }
    };
    let edge = th1_lower(k, 2, t_plus_path(2)?).max(0) as u64;
    let lower = lowers.into_iter().filter_map(Result::ok).fold(edge, u64::max);
    let upper = uppers.into_iter().filter_map(Result::ok).min();
    let record = BoundRecord {
        family: family.clone(),
        k,
        lower,
        upper,
        lower_provenance: LowerProvenance::AnalyticProposition,
        upper_provenance: upper.map(|_| UpperProvenance::AnalyticTheorem),
    };
    if record.upper.is_none() {
        return Err(Error::NotApplicable(format!("no upper bound applies to {family} k={k}")));
    }
    record.check()?;
    Ok(record)
}
