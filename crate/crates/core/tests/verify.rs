use symspec::io::{parse_curves, Format};
use symspec::verify::{emit_report, run_criterion, Mutation, Suite, VerifyOptions, CRITERIA};

fn opts(mutation: Option<Mutation>) -> VerifyOptions {
    VerifyOptions { suite: Suite::All, workers: 1, mutation }
}

#[test]
fn every_criterion_has_a_name() {
    let ids: Vec<u8> = CRITERIA.iter().map(|(i, _)| *i).collect();
    assert_eq!(ids, (1..=13).collect::<Vec<_>>());
    let bogus = run_criterion(99, &opts(None));
    assert!(!bogus[0].passed && bogus[0].measured.is_nan());
}

#[test]
fn analytic_checks_report_thresholds() {
    let checks = run_criterion(1, &opts(None));
    assert_eq!(checks[0].threshold, 1e-8);
    assert!(checks[0].passed, "{}", checks[0].line());
    assert!(checks[0].line().starts_with("PASS c01"));
}

#[test]
fn injected_edge_bug_is_caught() {
    let good = run_criterion(5, &opts(None))[0].measured;
    let bad = run_criterion(5, &opts(Some(Mutation::EdgeProfileSign)))[0].measured;
    assert!(bad > 10.0 * good, "{good} vs {bad}");
    let c6 = &run_criterion(6, &opts(Some(Mutation::EdgeProfileSign)))[0];
    assert!(!c6.passed && c6.measured > 1.0, "{}", c6.line());

    let c9 = run_criterion(9, &opts(Some(Mutation::EdgeProfileSign)));
    assert!(!c9[0].passed, "{}", c9[0].line());
    assert!(c9[1].passed, "bulk check does not use the edge profile: {}", c9[1].line());
}

#[test]
fn report_csv_has_overall_footer() {
    let checks = run_criterion(2, &opts(None));
    let report = symspec::verify::VerificationReport::new(checks);
    let text = emit_report(&report, Format::Csv).unwrap();
    assert!(text.starts_with("name,measured,threshold,comparison,passed,seconds,detail\n"));
    assert!(text.contains("# overall: PASS"));
    let json = emit_report(&report, Format::Json).unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["overall"], true);
    assert_eq!(v["checks"][0]["comparison"], "<=");
    assert!(parse_curves(&text, Format::Csv).is_err());
}
