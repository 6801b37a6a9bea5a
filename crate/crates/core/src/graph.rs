//! Distance sets on the integers and exact vertex distances.
//!
//! A distance graph `D(d1, ..., dm)` has vertex set `Z`, with `i ~ j` iff
//! `|i - j|` is in the distance set. Every distance depends only on the
//! separation `|i - j|`, so most functions here take that separation
//! (`delta`) directly.
//!
//! The three named families have closed forms. General sets, and every
//! cross-check of the closed forms, go through [`distance_oracle`], a
//! breadth-first search on a finite window of the integer line.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Default cap on the number of vertices the oracle may explore.
pub const DEFAULT_WINDOW_CAP: u64 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// `D(1, 2, ..., t)`
    Consecutive,
    /// `D(1, t)`
    OneAndT,
    /// `D(t-1, t)`
    TwoConsecutive,
    General,
}

impl FamilyKind {
    pub const NAMED: [FamilyKind; 3] = [
        FamilyKind::Consecutive,
        FamilyKind::OneAndT,
        FamilyKind::TwoConsecutive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Consecutive => "consecutive",
            FamilyKind::OneAndT => "one-and-t",
            FamilyKind::TwoConsecutive => "two-consecutive",
            FamilyKind::General => "general",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "consecutive" => Ok(FamilyKind::Consecutive),
            "one-and-t" => Ok(FamilyKind::OneAndT),
            "two-consecutive" => Ok(FamilyKind::TwoConsecutive),
            "general" => Ok(FamilyKind::General),
            other => Err(invalid(format!("unknown family '{other}'"))),
        }
    }
}

/// The distance set defining an infinite distance graph.
///
/// Constructors validate the parameter ranges and connectivity, so every
/// value of this type describes a connected graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DistanceFamily {
    kind: FamilyKind,
    t: u64,
    dset: Vec<u64>,
}

impl DistanceFamily {
    pub fn consecutive(t: u64) -> Result<Self> {
        if t < 2 {
            return Err(invalid(format!("D(1..t) needs t >= 2, got {t}")));
        }
        Ok(Self { kind: FamilyKind::Consecutive, t, dset: (1..=t).collect() })
    }

    pub fn one_and_t(t: u64) -> Result<Self> {
        if t < 3 {
            return Err(invalid(format!("D(1,t) needs t >= 3, got {t}")));
        }
        Ok(Self { kind: FamilyKind::OneAndT, t, dset: vec![1, t] })
    }

    pub fn two_consecutive(t: u64) -> Result<Self> {
        if t < 2 {
            return Err(invalid(format!("D(t-1,t) needs t >= 2, got {t}")));
        }
        Ok(Self { kind: FamilyKind::TwoConsecutive, t, dset: vec![t - 1, t] })
    }

    /// Arbitrary finite distance set. Order and duplicates are normalized away.
    pub fn general(dset: impl Into<Vec<u64>>) -> Result<Self> {
        let mut dset = dset.into();
        dset.sort_unstable();
        dset.dedup();
        if dset.is_empty() {
            return Err(invalid("empty distance set"));
        }
        if dset[0] == 0 {
            return Err(invalid("distance set entries must be >= 1"));
        }
        let g = dset.iter().copied().fold(0, gcd);
        if g != 1 {
            return Err(Error::Disconnected { dset, gcd: g });
        }
        let t = *dset.last().unwrap();
        Ok(Self { kind: FamilyKind::General, t, dset })
    }

    /// One of the three named families with parameter `t`.
    pub fn named(kind: FamilyKind, t: u64) -> Result<Self> {
        match kind {
            FamilyKind::Consecutive => Self::consecutive(t),
            FamilyKind::OneAndT => Self::one_and_t(t),
            FamilyKind::TwoConsecutive => Self::two_consecutive(t),
            FamilyKind::General => Err(invalid("a general family needs an explicit distance set")),
        }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    /// The family parameter; for general sets this is the largest step.
    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn dset(&self) -> &[u64] {
        &self.dset
    }

    pub fn maxstep(&self) -> u64 {
        self.t
    }

    /// Graph distance between two vertices at separation `delta`.
    pub fn distance_delta(&self, delta: u64) -> Result<u64> {
        match self.kind {
            FamilyKind::Consecutive => distance_consecutive(self.t, delta),
            FamilyKind::OneAndT => distance_one_and_t(self.t, delta),
            FamilyKind::TwoConsecutive => distance_two_consecutive(self.t, delta),
            FamilyKind::General => distance_oracle(self, delta),
        }
    }

    pub fn distance(&self, i: i64, j: i64) -> Result<u64> {
        self.distance_delta(i.abs_diff(j))
    }
}

impl fmt::Display for DistanceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FamilyKind::Consecutive if self.t > 3 => write!(f, "D(1,2,...,{})", self.t),
            _ => {
                let parts: Vec<String> = self.dset.iter().map(u64::to_string).collect();
                write!(f, "D({})", parts.join(","))
            }
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `delta = q * t + r` with `0 <= r < t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Separation {
    pub delta: u64,
    pub q: u64,
    pub r: u64,
}

impl Separation {
    pub fn new(delta: u64, t: u64) -> Self {
        Self { delta, q: delta / t, r: delta % t }
    }
}

fn check_t(t: u64) -> Result<()> {
    if t < 2 {
        Err(invalid(format!("t must be >= 2, got {t}")))
    } else {
        Ok(())
    }
}

/// Distance in `D(1, 2, ..., t)`: `q` if `r = 0`, else `q + 1`.
pub fn distance_consecutive(t: u64, delta: u64) -> Result<u64> {
    check_t(t)?;
    let s = Separation::new(delta, t);
    Ok(if s.r == 0 { s.q } else { s.q + 1 })
}

/// Distance in `D(1, t)`: `min(q + r, q + 1 + t - r)`.
pub fn distance_one_and_t(t: u64, delta: u64) -> Result<u64> {
    check_t(t)?;
    if delta == 0 {
        return Ok(0);
    }
    let s = Separation::new(delta, t);
    Ok((s.q + s.r).min(s.q + 1 + t - s.r))
}

/// Exact distance in `D(t-1, t)`: the least `|a| + |b|` with
/// `a (t-1) + b t = delta`.
///
/// Solutions form the family `a = -delta + m t`, `b = delta - m (t-1)`; the
/// objective is convex piecewise linear in `m`, so scanning between the two
/// kink points (widened by one on each side) finds the minimum.
pub fn distance_two_consecutive(t: u64, delta: u64) -> Result<u64> {
    check_t(t)?;
    if delta == 0 {
        return Ok(0);
    }
    let t = t as i128;
    let d = delta as i128;
    let lo = d / t - 1;
    let hi = (d + t - 2) / (t - 1) + 1;
    let best = (lo..=hi)
        .map(|m| (-d + m * t).abs() + (d - m * (t - 1)).abs())
        .min()
        .expect("scan range is nonempty");
    Ok(best as u64)
}

/// The bound `q + t` on the `D(t-1, t)` distance.
pub fn distance_upper_two_consecutive(t: u64, delta: u64) -> Result<u64> {
    check_t(t)?;
    Ok(delta / t + t)
}

/// Breadth-first search distance with the default window cap.
pub fn distance_oracle(family: &DistanceFamily, delta: u64) -> Result<u64> {
    distance_oracle_with_cap(family, delta, DEFAULT_WINDOW_CAP)
}

/// Breadth-first search over the integer window `[-W, delta + W]` with
/// `W = m^2 + m * ceil(delta / m)`, `m` the largest step.
pub fn distance_oracle_with_cap(family: &DistanceFamily, delta: u64, cap: u64) -> Result<u64> {
    if delta == 0 {
        return Ok(0);
    }
    let dists = bfs_window(family, delta, cap)?;
    Ok(dists[delta as usize])
}

/// Distances from vertex 0 to every `delta` in `0..=max_delta`, indexed by
/// `delta`. One BFS over the window for `max_delta`.
fn bfs_window(family: &DistanceFamily, max_delta: u64, cap: u64) -> Result<Vec<u64>> {
    let m = family.maxstep();
    let w = m
        .checked_mul(m)
        .and_then(|mm| m.checked_mul(max_delta.div_ceil(m)).and_then(|x| x.checked_add(mm)))
        .ok_or(Error::WindowTooLarge { size: u64::MAX, cap })?;
    let size = max_delta
        .checked_add(w.saturating_mul(2))
        .and_then(|s| s.checked_add(1))
        .unwrap_or(u64::MAX);
    if size > cap {
        return Err(Error::WindowTooLarge { size, cap });
    }
    let size = size as usize;
    let origin = w as usize;
    let mut seen = vec![u64::MAX; size];
    seen[origin] = 0;
    let mut queue = VecDeque::from([origin]);
    while let Some(v) = queue.pop_front() {
        let dv = seen[v];
        for &step in family.dset() {
            let step = step as usize;
            for next in [v.checked_sub(step), v.checked_add(step).filter(|&x| x < size)]
                .into_iter()
                .flatten()
            {
                if seen[next] == u64::MAX {
                    seen[next] = dv + 1;
                    queue.push_back(next);
                }
            }
        }
    }
    let out: Vec<u64> = seen[origin..=origin + max_delta as usize].to_vec();
    if out.contains(&u64::MAX) {
        return Err(Error::Conflict(format!("BFS window failed to reach a vertex for {family}")));
    }
    Ok(out)
}

/// Precomputed distances for separations `0..=max_delta`.
#[derive(Clone, Debug)]
pub struct DistanceTable {
    dists: Vec<u64>,
}

impl DistanceTable {
    pub fn new(family: &DistanceFamily, max_delta: u64) -> Result<Self> {
        let dists = match family.kind() {
            FamilyKind::General => bfs_window(family, max_delta, DEFAULT_WINDOW_CAP)?,
            _ => (0..=max_delta)
                .map(|d| family.distance_delta(d))
                .collect::<Result<_>>()?,
        };
        Ok(Self { dists })
    }

    #[inline]
    pub fn get(&self, delta: usize) -> u64 {
        self.dists[delta]
    }

    pub fn max_delta(&self) -> usize {
        self.dists.len() - 1
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.dists
    }
}
