use orbit_geodesics::cli::{run_suite, CheckName, RunConfig};
use orbit_geodesics::report::Verdict;

#[test]
fn default_suite_passes_at_n32() {
    let cfg = RunConfig {
        n: 32,
        ..RunConfig::default()
    };
    let report = run_suite(&cfg).unwrap();
    let names: Vec<&str> = report.checks.iter().map(|c| c.check.as_str()).collect();
    let expected: Vec<&str> = CheckName::ALL.iter().map(|c| c.as_str()).collect();
    assert_eq!(names, expected);
    for c in &report.checks {
        assert_eq!(c.verdict, Verdict::Pass, "{}: {:?}", c.check, c.notes);
    }
    assert_eq!(report.verdict, Verdict::Pass);
}

#[test]
fn partial_suite_runs_only_requested_checks() {
    let mut cfg = RunConfig {
        n: 16,
        ..RunConfig::default()
    };
    cfg.suite = vec![CheckName::Certify, CheckName::ColumnMultiple, CheckName::Obstruction];
    let report = run_suite(&cfg).unwrap();
    assert_eq!(report.checks.len(), 3);
    assert!(report.checks.iter().all(|c| c.verdict == Verdict::Pass));
}
