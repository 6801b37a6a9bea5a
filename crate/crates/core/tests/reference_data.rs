use radiolab::bounds::best_bounds;
use radiolab::graph::{DistanceFamily, FamilyKind};
use radiolab::report::{classify, reference_table, Status, REFERENCE_CSV};
use sha2::{Digest, Sha256};

const REFERENCE_SHA256: &str = "3303bf59dbc48b04166b03d99c20530c61a5b6c65cf47408ca825742fd40d172";

#[test]
fn reference_checksum() {
    let digest = Sha256::digest(REFERENCE_CSV.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    assert_eq!(hex, REFERENCE_SHA256);
}

#[test]
fn one_row_per_cell() {
    let table = reference_table();
    for kind in FamilyKind::NAMED {
        for t in 2..=9 {
            for k in 2..=9 {
                let n = table.iter().filter(|e| e.family == kind && e.t == t && e.k == k).count();
                assert_eq!(n, 1, "{kind} t={t} k={k}");
            }
        }
    }
}

#[test]
fn analytic_bounds_never_conflict_with_reference() {
    for e in reference_table() {
        let Ok(f) = DistanceFamily::named(e.family, e.t) else { continue };
        let b = best_bounds(&f, e.k).unwrap();
        assert_ne!(classify(&b, &e), Status::Conflict, "{f} k={}", e.k);
    }
}
