//! Exhaustive searches: prefix proofs of lower bounds, exact upper
//! traceable numbers, and discovery of periodic patterns.
//!
//! # Prefix proofs
//!
//! Suppose `c` is a radio k-labeling of a distance graph with span `l`.
//! Shift labels so the minimum is 0 and translate the vertex set so that a
//! vertex with label 0 sits at position 1; distance graphs are invariant
//! under translation, so the result is again a radio k-labeling of span
//! `l`. Its restriction to vertices `1..=n` uses labels in `0..=l`, has
//! vertex 1 labeled 0, and satisfies the radio condition under the
//! infinite-graph distances. If no such assignment of `1..=n` exists, then
//! `rl_k > l`.
//!
//! The search labels vertices left to right, trying labels in ascending
//! order, and checks each new vertex only against the previous
//! `k * maxstep` vertices; pairs further apart are at distance `> k`.
//!
//! # Determinism
//!
//! The root is split on the label of vertex 2. Each root branch is searched
//! with its own node budget, so the verdict and witness do not depend on
//! the number of workers: the reported result is the one of the first
//! branch (in label order) that did not exhaust. Time budgets are inherently
//! scheduling dependent.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundRecord, LowerProvenance, UpperProvenance};
use crate::error::{invalid, Error, Result};
use crate::graph::{DistanceFamily, DistanceTable, FamilyKind};
use crate::pattern::{self, PeriodicPattern, Verdict};

/// Largest `n` accepted by [`t_plus_exact`].
pub const T_PLUS_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Number of consecutive vertices a prefix proof labels.
    pub max_prefix: usize,
    /// Largest label any search may use.
    pub span_ceiling: u64,
    /// Node expansions allowed per root branch of a prefix proof, or per
    /// pattern search call.
    pub node_budget: u64,
    pub time_budget: Duration,
    pub workers: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_prefix: 64,
            span_ceiling: 4096,
            node_budget: 10_000_000,
            time_budget: Duration::from_secs(30),
            workers: 1,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_prefix == 0 {
            return Err(invalid("max_prefix must be positive"));
        }
        if self.node_budget == 0 {
            return Err(invalid("node_budget must be positive"));
        }
        if self.time_budget.is_zero() {
            return Err(invalid("time_budget must be positive"));
        }
        if self.workers == 0 {
            return Err(invalid("workers must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InconclusiveReason {
    /// A full prefix labeling exists; the witness is attached.
    WitnessFound,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ProofOutcome {
    /// No labeling of `prefix` consecutive vertices with labels in `0..=l`
    /// and the first vertex at 0 exists, so `rl_k > l`.
    ProvenGreaterThan { l: u64, prefix: usize },
    Inconclusive {
        reason: InconclusiveReason,
        witness: Option<Vec<u64>>,
    },
}

impl ProofOutcome {
    pub fn is_proven(&self) -> bool {
        matches!(self, ProofOutcome::ProvenGreaterThan { .. })
    }
}

/// A prefix proof together with its parameters and cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofCertificate {
    pub family: DistanceFamily,
    pub k: u64,
    pub l: u64,
    pub max_prefix: usize,
    pub outcome: ProofOutcome,
    pub nodes: u64,
    pub elapsed: Duration,
}

/// Label sets as bitmasks over `0..=l`.
struct LabelMask {
    words: Vec<u64>,
    limit: u64,
}

impl LabelMask {
    fn new(limit: u64) -> Self {
        Self { words: vec![0; (limit as usize + 1).div_ceil(64)], limit }
    }

    fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    fn forbid(&mut self, lo: u64, hi: u64) {
        let hi = hi.min(self.limit);
        if lo > hi {
            return;
        }
        let (lo, hi) = (lo as usize, hi as usize);
        let (wl, wh) = (lo / 64, hi / 64);
        for w in wl..=wh {
            let start = if w == wl { lo % 64 } else { 0 };
            let end = if w == wh { hi % 64 } else { 63 };
            let bits = if end - start == 63 { u64::MAX } else { ((1u64 << (end - start + 1)) - 1) << start };
            self.words[w] |= bits;
        }
    }

    /// Free labels of word `w`, as a bitmask.
    fn free_word(&self, w: usize) -> u64 {
        let mut free = !self.words[w];
        let last = self.limit as usize / 64;
        if w == last {
            let top = self.limit as usize % 64;
            if top < 63 {
                free &= (1u64 << (top + 1)) - 1;
            }
        }
        free
    }

    fn free_labels(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for w in 0..self.words.len() {
            let mut free = self.free_word(w);
            while free != 0 {
                out.push((w * 64) as u64 + free.trailing_zeros() as u64);
                free &= free - 1;
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Flow {
    Exhausted,
    Found,
    Budget,
    Cancelled,
}

/// Forbidden radius around each earlier label, by position offset:
/// a label `x` conflicts with label `c` at offset `e` iff `|x - c| <= radius`.
/// Offsets whose distance already exceeds `k` are omitted.
type Constraints = Vec<(usize, u64)>;

struct Dfs<'a> {
    n: usize,
    labels: Vec<u64>,
    masks: Vec<LabelMask>,
    constraints: &'a [Constraints],
    nodes: u64,
    node_budget: u64,
    deadline: Instant,
    deepest: usize,
    cancel: Option<(&'a AtomicUsize, usize)>,
}

impl<'a> Dfs<'a> {
    fn new(
        l: u64,
        n: usize,
        constraints: &'a [Constraints],
        node_budget: u64,
        deadline: Instant,
    ) -> Self {
        Self {
            n,
            labels: Vec::with_capacity(n),
            masks: (0..n).map(|_| LabelMask::new(l)).collect(),
            constraints,
            nodes: 0,
            node_budget,
            deadline,
            deepest: 0,
            cancel: None,
        }
    }

    fn fill_mask(&mut self, depth: usize) {
        let mask = &mut self.masks[depth];
        mask.clear();
        for &(offset, radius) in &self.constraints[depth] {
            let c = self.labels[depth - offset];
            mask.forbid(c.saturating_sub(radius), c + radius);
        }
    }

    fn extend(&mut self) -> Flow {
        let depth = self.labels.len();
        self.deepest = self.deepest.max(depth);
        if depth == self.n {
            return Flow::Found;
        }
        self.nodes += 1;
        if self.nodes > self.node_budget {
            return Flow::Budget;
        }
        if self.nodes & 0x3ff == 0 {
            if Instant::now() >= self.deadline {
                return Flow::Budget;
            }
            if let Some((best, me)) = self.cancel {
                if best.load(Ordering::Relaxed) < me {
                    return Flow::Cancelled;
                }
            }
        }
        self.fill_mask(depth);
        for w in 0..self.masks[depth].words.len() {
            let mut free = self.masks[depth].free_word(w);
            while free != 0 {
                let x = (w * 64) as u64 + free.trailing_zeros() as u64;
                free &= free - 1;
                self.labels.push(x);
                match self.extend() {
                    Flow::Exhausted => {
                        self.labels.pop();
                    }
                    other => return other,
                }
            }
        }
        Flow::Exhausted
    }
}

/// Per-depth constraints for a linear prefix: vertex `v` against
/// `v - offset` for offsets `1..=min(v, horizon)`.
fn prefix_constraints(table: &DistanceTable, k: u64, n: usize) -> Vec<Constraints> {
    let horizon = table.max_delta();
    (0..n)
        .map(|v| {
            (1..=v.min(horizon))
                .filter_map(|e| {
                    let d = table.get(e);
                    (d <= k).then(|| (e, k - d))
                })
                .collect()
        })
        .collect()
}

enum BranchResult {
    Exhausted { deepest: usize },
    Found(Vec<u64>),
    Budget,
    Cancelled,
}

/// Tries to label vertices `1..=max_prefix` with labels `0..=l`, vertex 1
/// at 0, satisfying the radio condition. See the module docs for why
/// failure proves `rl_k > l`.
pub fn prove_lower(family: &DistanceFamily, k: u64, l: u64, config: &SearchConfig) -> Result<ProofCertificate> {
    config.validate()?;
    if k == 0 {
        return Err(invalid("k must be >= 1"));
    }
    let start = Instant::now();
    let deadline = start + config.time_budget;
    let n = config.max_prefix;
    let horizon = k * family.maxstep();
    let table = DistanceTable::new(family, horizon)?;
    let constraints = prefix_constraints(&table, k, n);

    let finish = |outcome, nodes| ProofCertificate {
        family: family.clone(),
        k,
        l,
        max_prefix: n,
        outcome,
        nodes,
        elapsed: start.elapsed(),
    };

    if n == 1 {
        let outcome = ProofOutcome::Inconclusive {
            reason: InconclusiveReason::WitnessFound,
            witness: Some(vec![0]),
        };
        return Ok(finish(outcome, 1));
    }

    let roots = {
        let mut root = Dfs::new(l, n, &constraints, 1, deadline);
        root.labels.push(0);
        root.fill_mask(1);
        root.masks[1].free_labels()
    };
    if roots.is_empty() {
        return Ok(finish(ProofOutcome::ProvenGreaterThan { l, prefix: 2 }, 1));
    }

    let best = AtomicUsize::new(usize::MAX);
    let run_branch = |b: usize| -> (BranchResult, u64) {
        let mut dfs = Dfs::new(l, n, &constraints, config.node_budget, deadline);
        dfs.labels.extend([0, roots[b]]);
        dfs.cancel = Some((&best, b));
        let flow = dfs.extend();
        let result = match flow {
            Flow::Exhausted => BranchResult::Exhausted { deepest: dfs.deepest },
            Flow::Found => BranchResult::Found(dfs.labels.clone()),
            Flow::Budget => BranchResult::Budget,
            Flow::Cancelled => BranchResult::Cancelled,
        };
        if matches!(result, BranchResult::Found(_) | BranchResult::Budget) {
            best.fetch_min(b, Ordering::Relaxed);
        }
        (result, dfs.nodes)
    };

    let results: Vec<(BranchResult, u64)> = if config.workers <= 1 {
        let mut out = Vec::new();
        for b in 0..roots.len() {
            let r = run_branch(b);
            let stop = !matches!(r.0, BranchResult::Exhausted { .. });
            out.push(r);
            if stop {
                break;
            }
        }
        out
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::Conflict(format!("thread pool: {e}")))?;
        pool.install(|| (0..roots.len()).into_par_iter().map(run_branch).collect())
    };

    let nodes = 1 + results.iter().map(|r| r.1).sum::<u64>();
    let mut deepest = 2;
    for (result, _) in results {
        match result {
            BranchResult::Exhausted { deepest: d } => deepest = deepest.max(d),
            BranchResult::Found(witness) => {
                let outcome = ProofOutcome::Inconclusive {
                    reason: InconclusiveReason::WitnessFound,
                    witness: Some(witness),
                };
                return Ok(finish(outcome, nodes));
            }
            BranchResult::Budget => {
                let outcome = ProofOutcome::Inconclusive {
                    reason: InconclusiveReason::BudgetExhausted,
                    witness: None,
                };
                return Ok(finish(outcome, nodes));
            }
            BranchResult::Cancelled => {
                return Err(Error::Conflict("cancelled branch precedes every definitive one".into()))
            }
        }
    }
    Ok(finish(ProofOutcome::ProvenGreaterThan { l, prefix: deepest + 1 }, nodes))
}

/// Pairwise distances among `n` vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u64>,
}

impl DistanceMatrix {
    /// The path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let d = (0..n * n).map(|x| (x / n).abs_diff(x % n) as u64).collect();
        Self { n, d }
    }

    /// Vertices `0..n` of the distance graph, with infinite-graph distances.
    pub fn family_prefix(family: &DistanceFamily, n: usize) -> Result<Self> {
        let table = DistanceTable::new(family, n.saturating_sub(1) as u64)?;
        let d = (0..n * n).map(|x| table.get((x / n).abs_diff(x % n))).collect();
        Ok(Self { n, d })
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(invalid("distance matrix must be square"));
        }
        Ok(Self { n, d: rows.concat() })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> u64 {
        self.d[a * self.n + b]
    }
}

/// An ordering of the vertices and the sum of consecutive distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderingScore {
    pub ordering: Vec<usize>,
    pub score: u64,
}

impl OrderingScore {
    pub fn of(matrix: &DistanceMatrix, ordering: Vec<usize>) -> Self {
        let score = ordering.windows(2).map(|w| matrix.get(w[0], w[1])).sum();
        Self { ordering, score }
    }
}

/// An ordering maximizing the sum of consecutive distances, by dynamic
/// programming over (visited set, last vertex).
pub fn t_plus_ordering(matrix: &DistanceMatrix) -> Result<OrderingScore> {
    let n = matrix.order();
    if n < 2 {
        return Err(invalid(format!("t+ needs n >= 2, got {n}")));
    }
    if n > T_PLUS_CAP {
        return Err(invalid(format!("t+ is capped at n = {T_PLUS_CAP}, got {n}")));
    }
    const NONE: i64 = -1;
    let full = (1usize << n) - 1;
    let mut best = vec![NONE; (full + 1) * n];
    for v in 0..n {
        best[(1 << v) * n + v] = 0;
    }
    for mask in 1..=full {
        for last in 0..n {
            let cur = best[mask * n + last];
            if cur == NONE {
                continue;
            }
            let mut rest = full & !mask;
            while rest != 0 {
                let next = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let slot = &mut best[(mask | 1 << next) * n + next];
                let cand = cur + matrix.get(last, next) as i64;
                if cand > *slot {
                    *slot = cand;
                }
            }
        }
    }
    let mut last = (0..n).max_by_key(|&v| (best[full * n + v], std::cmp::Reverse(v))).unwrap();
    let score = best[full * n + last] as u64;
    let mut ordering = vec![last];
    let mut mask = full;
    while mask.count_ones() > 1 {
        let value = best[mask * n + last];
        let prev_mask = mask & !(1 << last);
        let prev = (0..n)
            .filter(|&p| prev_mask & (1 << p) != 0)
            .find(|&p| {
                let b = best[prev_mask * n + p];
                b != NONE && b + matrix.get(p, last) as i64 == value
            })
            .expect("dp predecessor exists");
        ordering.push(prev);
        mask = prev_mask;
        last = prev;
    }
    ordering.reverse();
    Ok(OrderingScore { ordering, score })
}

/// Upper traceable number `t+`: the largest sum of consecutive distances
/// over all vertex orderings.
pub fn t_plus_exact(matrix: &DistanceMatrix) -> Result<u64> {
    t_plus_ordering(matrix).map(|o| o.score)
}

/// Candidate periods `kt+1 ..= kt+t+3`.
pub fn default_periods(family: &DistanceFamily, k: u64) -> Vec<usize> {
    let t = family.t();
    ((k * t + 1) as usize..=(k * t + t + 3) as usize).collect()
}

/// The default periods followed by every other period up to
/// `2 (kt+t+3)`. Some optimal patterns only exist outside the default
/// window (`D(3,4)`, `k = 2` needs period 16).
pub fn extended_periods(family: &DistanceFamily, k: u64) -> Vec<usize> {
    let mut periods = default_periods(family, k);
    let top = 2 * *periods.last().expect("default periods are nonempty");
    let rest: Vec<usize> = (1..=top).filter(|p| !periods.contains(p)).collect();
    periods.extend(rest);
    periods
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternOutcome {
    Found(PeriodicPattern),
    NotFound,
    BudgetExhausted,
}

/// Per-position constraints for a cyclic block of length `period`, or
/// `None` if the period itself forces two equal labels too close.
fn cyclic_constraints(table: &DistanceTable, k: u64, period: usize) -> Option<Vec<Constraints>> {
    let horizon = table.max_delta();
    let mut min_dist = vec![u64::MAX; period];
    for delta in 1..=horizon {
        let slot = &mut min_dist[delta % period];
        *slot = (*slot).min(table.get(delta));
    }
    if min_dist[0] <= k {
        return None;
    }
    let by_offset: Constraints = (1..period)
        .filter_map(|e| {
            let d = min_dist[e].min(min_dist[period - e]);
            (d <= k).then(|| (e, k - d))
        })
        .collect();
    Some(
        (0..period)
            .map(|p| by_offset.iter().copied().filter(|&(e, _)| e <= p).collect())
            .collect(),
    )
}

/// Searches for a periodic pattern with labels in `0..=span_ceiling`, over
/// each candidate period in order. Position 1 is fixed at label 0 (any
/// pattern can be rotated and shifted to that form). A found pattern is
/// re-verified before it is returned.
pub fn search_pattern(
    family: &DistanceFamily,
    k: u64,
    span_ceiling: u64,
    periods: &[usize],
    config: &SearchConfig,
) -> Result<PatternOutcome> {
    config.validate()?;
    if k == 0 {
        return Err(invalid("k must be >= 1"));
    }
    let deadline = Instant::now() + config.time_budget;
    let table = DistanceTable::new(family, k * family.maxstep())?;
    let mut nodes_left = config.node_budget;
    for &period in periods {
        if period == 0 {
            return Err(invalid("periods must be positive"));
        }
        let Some(constraints) = cyclic_constraints(&table, k, period) else { continue };
        let mut dfs = Dfs::new(span_ceiling, period, &constraints, nodes_left, deadline);
        dfs.labels.push(0);
        let flow = dfs.extend();
        nodes_left = nodes_left.saturating_sub(dfs.nodes);
        match flow {
            Flow::Found => {
                let candidate = PeriodicPattern::new(family.clone(), k, dfs.labels, 0)?;
                return match pattern::verify_periodic(&candidate)? {
                    Verdict::Accept => Ok(PatternOutcome::Found(candidate)),
                    Verdict::Reject(v) => Err(Error::Conflict(format!("searched pattern rejected: {v}"))),
                };
            }
            Flow::Exhausted => {}
            Flow::Budget | Flow::Cancelled => return Ok(PatternOutcome::BudgetExhausted),
        }
        if nodes_left == 0 {
            return Ok(PatternOutcome::BudgetExhausted);
        }
    }
    Ok(PatternOutcome::NotFound)
}

/// [`search_pattern`] collapsed to "pattern or none".
pub fn find_pattern(
    family: &DistanceFamily,
    k: u64,
    span_ceiling: u64,
    periods: &[usize],
    config: &SearchConfig,
) -> Result<Option<PeriodicPattern>> {
    Ok(match search_pattern(family, k, span_ceiling, periods, config)? {
        PatternOutcome::Found(p) => Some(p),
        _ => None,
    })
}

/// Cache key for prefix proofs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProofKey {
    pub family: FamilyKind,
    pub t: u64,
    pub dset: Vec<u64>,
    pub k: u64,
    pub l: u64,
    pub prefix: usize,
    pub node_budget: u64,
    pub time_budget_ms: u64,
}

impl ProofKey {
    pub fn new(family: &DistanceFamily, k: u64, l: u64, config: &SearchConfig) -> Self {
        Self {
            family: family.kind(),
            t: family.t(),
            dset: family.dset().to_vec(),
            k,
            l,
            prefix: config.max_prefix,
            node_budget: config.node_budget,
            time_budget_ms: config.time_budget.as_millis() as u64,
        }
    }
}

/// Storage for definitive prefix-proof outcomes.
pub trait ProofStore: Sync {
    fn lookup(&self, key: &ProofKey) -> Option<ProofOutcome>;
    fn record(&self, key: &ProofKey, outcome: &ProofOutcome);
}

/// Closes in on `rl_k` by combining analytic bounds, prefix proofs and
/// pattern searches within the budgets of `config` (the time budget covers
/// the whole call).
pub fn exact_value(family: &DistanceFamily, k: u64, config: &SearchConfig) -> Result<BoundRecord> {
    exact_value_with(family, k, config, None)
}

pub fn exact_value_with(
    family: &DistanceFamily,
    k: u64,
    config: &SearchConfig,
    store: Option<&dyn ProofStore>,
) -> Result<BoundRecord> {
    config.validate()?;
    let deadline = Instant::now() + config.time_budget;
    let remaining = |c: &SearchConfig| -> Option<SearchConfig> {
        let left = deadline.saturating_duration_since(Instant::now());
        (!left.is_zero()).then(|| SearchConfig { time_budget: left, ..c.clone() })
    };

    let mut record = match family.kind() {
        FamilyKind::General => BoundRecord {
            family: family.clone(),
            k,
            lower: k,
            upper: None,
            lower_provenance: LowerProvenance::AnalyticProposition,
            upper_provenance: None,
        },
        _ => bounds::best_bounds(family, k)?,
    };
    if let Ok((span, _)) = pattern::certified_upper(family, k) {
        if record.upper.is_none_or(|u| span <= u) {
            record.upper = Some(span);
            record.upper_provenance = Some(UpperProvenance::VerifiedPattern);
        }
    }

    let mut l = record.lower.saturating_sub(1);
    while record.upper.is_none_or(|u| record.lower < u) && l <= config.span_ceiling {
        let key = ProofKey::new(family, k, l, config);
        let outcome = match store.and_then(|s| s.lookup(&key)) {
            Some(o) => o,
            None => {
                let Some(cfg) = remaining(config) else { break };
                let outcome = prove_lower(family, k, l, &cfg)?.outcome;
                if let (Some(s), false) = (store, is_budget(&outcome)) {
                    s.record(&key, &outcome);
                }
                outcome
            }
        };
        if !outcome.is_proven() {
            break;
        }
        if l + 1 > record.lower {
            record.lower = l + 1;
            record.lower_provenance = LowerProvenance::PrefixSearchProof;
        }
        l += 1;
    }

    // Feasibility is monotone in the label ceiling, so descend from just
    // below the best known upper bound until a search fails.
    let periods = extended_periods(family, k);
    loop {
        let ceiling = match record.upper {
            Some(u) if u > record.lower => u - 1,
            Some(_) => break,
            None => config.span_ceiling,
        };
        if ceiling > config.span_ceiling {
            break;
        }
        let Some(cfg) = remaining(config) else { break };
        match search_pattern(family, k, ceiling, &periods, &cfg)? {
            PatternOutcome::Found(p) => {
                record.upper = Some(p.span());
                record.upper_provenance = Some(UpperProvenance::VerifiedPattern);
            }
            PatternOutcome::NotFound | PatternOutcome::BudgetExhausted => break,
        }
    }

    record.check()?;
    Ok(record)
}

fn is_budget(outcome: &ProofOutcome) -> bool {
    matches!(
        outcome,
        ProofOutcome::Inconclusive { reason: InconclusiveReason::BudgetExhausted, .. }
    )
}
