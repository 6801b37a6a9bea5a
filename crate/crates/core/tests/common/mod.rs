#![allow(dead_code)]

use radiolab::graph::{distance_oracle, DistanceFamily};
use radiolab::pattern::{PeriodicPattern, Violation};
use radiolab::search::{InconclusiveReason, ProofOutcome};

/// Distances by separation `0..=max`, straight from breadth-first search.
pub fn oracle_distances(family: &DistanceFamily, max: u64) -> Vec<u64> {
    (0..=max).map(|d| distance_oracle(family, d).unwrap()).collect()
}

/// Longest prefix of `labels` in which every pair satisfies the radio
/// condition, checking all pairs.
fn valid_prefix_len(labels: &[u64], dist: &[u64], k: u64) -> usize {
    for j in 1..labels.len() {
        for i in 0..j {
            if labels[i].abs_diff(labels[j]) + dist[j - i] <= k {
                return j;
            }
        }
    }
    labels.len()
}

/// Enumerates every labeling of vertices `1..=n` with labels in `0..=l`
/// and vertex 1 at 0, in lexicographic order, without pruning.
pub fn naive_prefix(family: &DistanceFamily, k: u64, l: u64, n: usize) -> ProofOutcome {
    if n == 1 {
        return ProofOutcome::Inconclusive {
            reason: InconclusiveReason::WitnessFound,
            witness: Some(vec![0]),
        };
    }
    let dist = oracle_distances(family, n as u64);
    let mut labels = vec![0u64; n];
    let mut longest = 1;
    loop {
        let m = valid_prefix_len(&labels, &dist, k);
        if m == n {
            return ProofOutcome::Inconclusive {
                reason: InconclusiveReason::WitnessFound,
                witness: Some(labels),
            };
        }
        longest = longest.max(m);
        // odometer over positions 1..n
        let mut pos = n - 1;
        loop {
            if labels[pos] < l {
                labels[pos] += 1;
                break;
            }
            labels[pos] = 0;
            pos -= 1;
            if pos == 0 {
                return ProofOutcome::ProvenGreaterThan { l, prefix: longest + 1 };
            }
        }
    }
}

/// First violating pair `(i, j)`, `i <= P`, found by checking every pair of
/// an explicit window of `max(3P, P + k * maxstep)` vertices.
pub fn window_violation(pattern: &PeriodicPattern) -> Option<Violation> {
    let p = pattern.period() as i64;
    let reach = (pattern.k * pattern.family.maxstep()) as i64;
    let window = (3 * p).max(p + reach);
    let dists = oracle_distances(&pattern.family, (window - 1) as u64);
    for i in 1..=p {
        for j in i + 1..=window {
            let dist = dists[(j - i) as usize];
            let gap = pattern.label_of(i).abs_diff(pattern.label_of(j));
            if gap + dist <= pattern.k {
                return Some(Violation { i, j, label_gap: gap, dist });
            }
        }
    }
    None
}
