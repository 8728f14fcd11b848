use sqsum::equation::{D_MAX, D_MIN};
use sqsum::filters;
use sqsum::pipeline::{exponent_reduction, verify, Resolution, VerifyConfig};
use sqsum::search::{self, SearchBox};

fn small_config() -> VerifyConfig {
    VerifyConfig { x_bound: 5_000, n_max: 12, scan_u_bound: 600 }
}

#[test]
fn every_case_is_covered_exactly_once() {
    let cfg = small_config();
    let report = verify(&cfg).unwrap();
    for d in D_MIN..=D_MAX {
        for n in 2..=cfg.n_max {
            let hits: Vec<_> = report.cases.iter().filter(|c| c.d == d && c.n == n).collect();
            assert_eq!(hits.len(), 1, "d={d} n={n}");
            let class = &hits[0].exponent_class;
            let canonical = exponent_reduction(n);
            assert!(class.ends_with(&canonical.to_string()), "{class} vs {canonical}");
            assert_ne!(hits[0].resolution.kind(), "unresolved");
        }
    }
}

#[test]
fn embedded_certificates_reverify() {
    let report = verify(&small_config()).unwrap();
    let mut seen = 0;
    for case in &report.cases {
        if let Resolution::Eliminated { certificate } = &case.resolution {
            assert!(filters::verify(certificate), "d={} n={}", case.d, case.n);
            assert_eq!(certificate.d, case.d);
            seen += 1;
        }
    }
    assert!(seen > 50);
}

#[test]
fn family_and_sporadic_equal_search_output() {
    let cfg = small_config();
    let report = verify(&cfg).unwrap();
    assert!(report.passed(), "{report}");
    let b = SearchBox::new(D_MIN, D_MAX, cfg.x_bound, cfg.n_max).unwrap();
    let found = search::brute_force(&b);
    let mut predicted: Vec<_> = report
        .family_members()
        .iter()
        .map(|m| sqsum::Solution::new(2, m.x.clone(), m.y.clone(), 2).unwrap())
        .chain(report.sporadic_solutions())
        .collect();
    predicted.sort();
    assert_eq!(found, predicted);
}

#[test]
fn reports_are_byte_identical_across_runs_and_thread_counts() {
    let cfg = small_config();
    let a = verify(&cfg).unwrap().to_json();
    let b = sqsum::par::with_threads(Some(3), || verify(&cfg).unwrap().to_json());
    assert_eq!(a, b);
}

#[test]
fn json_schema_fields() {
    let report = verify(&VerifyConfig { x_bound: 200, n_max: 4, scan_u_bound: 100 }).unwrap();
    let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(v["parameters"]["x_bound"], "200");
    assert_eq!(v["parameters"]["n_max"], 4);
    assert_eq!(v["verdict"], "pass");
    assert!(v["oracle_diff"].as_array().unwrap().is_empty());
    let cases = v["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 27);
    for c in cases {
        assert!(c["d"].is_u64());
        assert!(c["exponent_class"].is_string());
        assert!(c["resolution"]["kind"].is_string());
    }
    let sporadic = cases
        .iter()
        .find(|c| c["d"] == 2 && c["n"] == 4)
        .unwrap();
    assert_eq!(sporadic["resolution"]["kind"], "sporadic");
    let xs: Vec<&str> = sporadic["resolution"]["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["x"].as_str().unwrap())
        .collect();
    assert_eq!(xs, vec!["-121", "-2", "-1", "118"]);
    let back: sqsum::VerificationReport = serde_json::from_value(v).unwrap();
    assert_eq!(back, report);
}
