//! Catalog sweeps beyond the acceptance range.

use cl_structures::catalog::{sweep, CatalogSpec, SweepConfig};
use cl_structures::census::Status;

fn statuses<'a>(report: &'a cl_structures::catalog::SweepReport, check: &'a str) -> impl Iterator<Item = Status> + 'a {
    report
        .rows
        .iter()
        .flat_map(|r| &r.statuses)
        .filter(move |(n, _)| n == check)
        .map(|(_, s)| *s)
}

/// Six-vertex cubic graphs have q = 4, so orientable strips other than P_x
/// exist and the switch relation is non-empty.
#[test]
fn cubic_nine_edges_exercises_phi() {
    let spec = CatalogSpec {
        max_edges: 9,
        cubic_only: true,
        ..CatalogSpec::default()
    };
    let report = sweep(&spec, &SweepConfig::default()).unwrap();
    assert_eq!(report.rows.iter().filter(|r| r.value["n"] == 6).count(), 17);
    for check in ["phi_pairs", "phi_fibers"] {
        let applicable = statuses(&report, check).filter(|s| *s == Status::Pass).count();
        assert!(applicable > 0, "{check} never applied");
        assert!(statuses(&report, check).all(|s| matches!(s, Status::Pass | Status::NotApplicable)));
    }
    for check in [
        "strip_bound",
        "p_lower_bound",
        "orientable_vs_nonorientable",
        "orientable_bound",
        "odd_q",
        "unswitch_boundary",
        "conjectures",
    ] {
        assert!(
            statuses(&report, check).all(|s| matches!(s, Status::Pass | Status::NotApplicable)),
            "{check}"
        );
    }
}

/// Switching an edge of a non-orientable strip can split its boundary; the
/// orientable half of the switching statement holds throughout.
#[test]
fn switch_violations_come_from_non_orientable_strips() {
    let spec = CatalogSpec {
        max_edges: 9,
        cubic_only: true,
        ..CatalogSpec::default()
    };
    let report = sweep(&spec, &SweepConfig::default()).unwrap();
    let mut violations = 0;
    for row in &report.rows {
        for c in row.value["checks"].as_array().unwrap() {
            if c["name"] == "switch_lemma" && c["status"] == "fail" {
                assert_eq!(c["witness"]["violations_from_orientable"], 0);
                violations += c["witness"]["violations"].as_u64().unwrap();
            }
        }
    }
    assert!(violations > 0);
}

#[test]
fn unresolved_non_cubic_graphs_give_findings_not_failures() {
    let spec = CatalogSpec {
        max_edges: 5,
        ..CatalogSpec::default()
    };
    let report = sweep(&spec, &SweepConfig::default()).unwrap();
    assert_eq!(report.failures(), 0);
    let fig8 = report.rows.iter().find(|r| r.name == "m2n1-0").unwrap();
    assert!(fig8.statuses.contains(&("strip_bound".to_string(), Status::Finding)));
}

#[test]
fn cubic_resolutions_satisfy_the_bounds() {
    let spec = CatalogSpec {
        max_edges: 5,
        ..CatalogSpec::default()
    };
    let cfg = SweepConfig {
        resolve_cubic: true,
        ..SweepConfig::default()
    };
    let report = sweep(&spec, &cfg).unwrap();
    for row in &report.rows {
        let (n, m) = (row.value["n"].as_u64().unwrap(), row.value["m"].as_u64().unwrap());
        assert_eq!(2 * m, 3 * n, "{} is not cubic after resolution", row.name);
        for (check, status) in &row.statuses {
            if check != "switch_lemma" {
                assert!(matches!(status, Status::Pass | Status::NotApplicable), "{} {check}", row.name);
            }
        }
    }
}
