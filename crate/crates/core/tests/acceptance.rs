//! One PASS/FAIL line per acceptance criterion. Each criterion has a fixed
//! wall-clock limit; exceeding it is a failure even if the check holds.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use radiolab::bounds::{
    le1_traceable_upper, lower_consecutive, lower_one_and_t, lower_two_consecutive, t_plus_path,
    traceable_alpha_beta, upper_consecutive, upper_one_and_t, upper_two_consecutive_oddk, RationalBound,
};
use radiolab::graph::{distance_oracle, DistanceFamily, FamilyKind};
use radiolab::pattern::{build_pattern, verify_periodic, Construction, Verdict};
use radiolab::report::{reference_table, run_grid, Status};
use radiolab::search::{exact_value, prove_lower, t_plus_exact, DistanceMatrix, SearchConfig};

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn named(kind: FamilyKind, t: u64) -> Option<DistanceFamily> {
    DistanceFamily::named(kind, t).ok()
}

fn distance_oracle_agreement() -> Check {
    let mut checked = 0;
    for kind in FamilyKind::NAMED {
        for t in 2..=9 {
            let Some(f) = named(kind, t) else { continue };
            for delta in 0..=200 {
                let closed = f.distance_delta(delta).map_err(|e| e.to_string())?;
                let bfs = distance_oracle(&f, delta).map_err(|e| e.to_string())?;
                if closed != bfs {
                    return Err(format!("{f} delta={delta}: closed form {closed}, search {bfs}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} distances"))
}

fn traceable_path_formula() -> Check {
    for n in 2..=12u64 {
        let dp = t_plus_exact(&DistanceMatrix::path(n as usize)).map_err(|e| e.to_string())?;
        let formula = t_plus_path(n).map_err(|e| e.to_string())?;
        if dp != formula {
            return Err(format!("n={n}: exhaustive {dp}, formula {formula}"));
        }
    }
    Ok("n = 2..12".into())
}

/// Twice the span predicted for each construction.
fn twice_theorem_span(c: Construction, t: u64, k: u64) -> u64 {
    let base = t * k * k;
    match c {
        Construction::ConsecutiveEvenK => base + 2 * k,
        Construction::ConsecutiveOddKEvenT | Construction::ConsecutiveOddKOddT => base + t * k,
        Construction::OneAndTOddT => base - 1,
        Construction::OneAndTEvenT => base,
        Construction::TwoConsecutiveOddK => base + 2 * k - (t + 2),
    }
}

fn pattern_certification() -> Check {
    let mut cells = 0;
    for kind in FamilyKind::NAMED {
        for t in 2..=7 {
            let Some(f) = named(kind, t) else { continue };
            for k in 1..=7 {
                let Ok(c) = Construction::for_params(kind, t, k) else { continue };
                let p = build_pattern(&f, k).map_err(|e| format!("{f} k={k}: {e}"))?;
                match verify_periodic(&p).map_err(|e| e.to_string())? {
                    Verdict::Accept => {}
                    Verdict::Reject(v) => return Err(format!("{f} k={k}: {v}")),
                }
                if 2 * p.span() != twice_theorem_span(c, t, k) {
                    return Err(format!("{f} k={k}: span {} vs theorem {}/2", p.span(), twice_theorem_span(c, t, k)));
                }
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} constructions"))
}

fn exact_small_values() -> Check {
    let cells = [
        (FamilyKind::Consecutive, 2, 2, 6),
        (FamilyKind::Consecutive, 2, 3, 12),
        (FamilyKind::Consecutive, 3, 2, 8),
        (FamilyKind::OneAndT, 3, 2, 6),
        (FamilyKind::OneAndT, 3, 3, 11),
        (FamilyKind::TwoConsecutive, 3, 3, 14),
        (FamilyKind::TwoConsecutive, 4, 2, 7),
    ];
    let config = SearchConfig::default();
    for (kind, t, k, expected) in cells {
        let f = named(kind, t).unwrap();
        let r = exact_value(&f, k, &config).map_err(|e| format!("{f} k={k}: {e}"))?;
        if r.lower != expected || r.upper != Some(expected) {
            return Err(format!("{f} k={k}: got [{}, {:?}], expected {expected}", r.lower, r.upper));
        }
    }
    let grid_config = SearchConfig { time_budget: Duration::from_millis(250), ..SearchConfig::default() };
    let report = run_grid(&FamilyKind::NAMED, 2..=9, 2..=9, &grid_config, &reference_table(), None)
        .map_err(|e| e.to_string())?;
    let conflicts: Vec<_> = report
        .rows
        .iter()
        .filter(|r| r.status == Some(Status::Conflict))
        .map(|r| format!("{} t={} k={}", r.family, r.t, r.k))
        .collect();
    if !conflicts.is_empty() {
        return Err(format!("conflict rows: {}", conflicts.join("; ")));
    }
    let compared = report.rows.iter().filter(|r| r.status.is_some()).count();
    Ok(format!("7 exact cells; {} grid rows, {compared} compared, 0 conflicts", report.rows.len()))
}

fn analytic_consistency() -> Check {
    let table = reference_table();
    let mut pairs = 0;
    for e in &table {
        let (t, k) = (e.t, e.k);
        let (lowers, uppers) = match e.family {
            FamilyKind::Consecutive => (vec![lower_consecutive(t, k)], vec![upper_consecutive(t, k)]),
            FamilyKind::OneAndT => (vec![lower_one_and_t(t, k)], vec![upper_one_and_t(t, k)]),
            FamilyKind::TwoConsecutive => {
                (vec![lower_two_consecutive(t, k)], vec![upper_two_consecutive_oddk(t, k)])
            }
            FamilyKind::General => unreachable!(),
        };
        for lower in lowers.into_iter().filter_map(Result::ok) {
            if lower > e.upper {
                return Err(format!("{} t={t} k={k}: lower {lower} > reference upper {}", e.family, e.upper));
            }
            for upper in uppers.iter().filter_map(|u| u.as_ref().ok()) {
                if lower > *upper {
                    return Err(format!("{} t={t} k={k}: lower {lower} > upper {upper}", e.family));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} lower/upper pairs"))
}

fn le1_chain() -> Check {
    let mut checked = 0;
    for kind in FamilyKind::NAMED {
        for t in 2..=5 {
            let Some(f) = named(kind, t) else { continue };
            let (alpha, beta) = traceable_alpha_beta(&f).map_err(|e| e.to_string())?;
            for n in 2..=12u64 {
                let m = DistanceMatrix::family_prefix(&f, n as usize).map_err(|e| e.to_string())?;
                let t_plus = t_plus_exact(&m).map_err(|e| e.to_string())?;
                let bound = le1_traceable_upper(n, alpha, beta).map_err(|e| e.to_string())?;
                if RationalBound::integer(t_plus as i128) > bound {
                    return Err(format!("{f} n={n}: t+ {t_plus} > {bound}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} prefixes"))
}

fn mutation_suite() -> Check {
    let mut patterns = Vec::new();
    for kind in FamilyKind::NAMED {
        for t in 2..=7 {
            let Some(f) = named(kind, t) else { continue };
            for k in 1..=7 {
                if let Ok(p) = build_pattern(&f, k) {
                    patterns.push(p);
                }
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut rejected = 0;
    for round in 0..100 {
        let mut p = patterns[rng.gen_range(0..patterns.len())].clone();
        let i = rng.gen_range(0..p.period());
        let old = p.labels[i];
        let new = loop {
            let x = rng.gen_range(0..=p.span() + p.k);
            if x != old {
                break x;
            }
        };
        p.labels[i] = new;
        let fast = match verify_periodic(&p).map_err(|e| e.to_string())? {
            Verdict::Accept => None,
            Verdict::Reject(v) => Some(v),
        };
        let slow = common::window_violation(&p);
        if fast != slow {
            return Err(format!("round {round}, {} k={}: verifier {fast:?}, window {slow:?}", p.family, p.k));
        }
        rejected += usize::from(fast.is_some());
    }
    Ok(format!("100 mutations, {rejected} rejected"))
}

fn naive_equivalence() -> Check {
    let families = [DistanceFamily::consecutive(2).unwrap(), DistanceFamily::one_and_t(3).unwrap()];
    let mut cases = 0;
    for f in &families {
        for k in 1..=3 {
            for l in 0..=6 {
                for n in 1..=8 {
                    let config = SearchConfig { max_prefix: n, ..SearchConfig::default() };
                    let fast = prove_lower(f, k, l, &config).map_err(|e| e.to_string())?.outcome;
                    let slow = common::naive_prefix(f, k, l, n);
                    if fast != slow {
                        return Err(format!("{f} k={k} l={l} n={n}: search {fast:?}, enumeration {slow:?}"));
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} cases"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("distance oracle agreement", Duration::from_secs(10), distance_oracle_agreement),
        ("traceable path formula", Duration::from_secs(5), traceable_path_formula),
        ("pattern certification", Duration::from_secs(60), pattern_certification),
        ("exact small values and grid", Duration::from_secs(15 * 60), exact_small_values),
        ("analytic bound consistency", Duration::from_secs(1), analytic_consistency),
        ("traceable bound chain", Duration::from_secs(30), le1_chain),
        ("mutation suite", Duration::from_secs(60), mutation_suite),
        ("naive enumeration equivalence", Duration::from_secs(120), naive_equivalence),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed < limit => (true, d),
            Ok(d) => (false, format!("{d}; over time limit")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "{} {name}: {detail} ({:.2} s, limit {} s)",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
