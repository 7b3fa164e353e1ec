//! Runs the full acceptance suite and prints one PASS/FAIL line per check.
//!
//! Criteria 5 and 6 do not reach their stated tolerances at the stated `N`
//! (see the decisions ledger); they are reported as FAIL and expected to.
//! The target fails when the set of failing criteria differs from that.

use std::collections::BTreeSet;
use std::process::ExitCode;

use symspec::verify::{cmd_verify, Suite, VerifyOptions};

const EXPECTED_FAILURES: [u8; 2] = [5, 6];

fn criterion_id(name: &str) -> u8 {
    name[1..3].parse().expect("check names start with cNN")
}

fn main() -> ExitCode {
    let workers = std::env::var("SYMSPEC_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let report = cmd_verify(&VerifyOptions { suite: Suite::All, workers, mutation: None });

    for c in &report.checks {
        println!("{}", c.line());
    }
    let failing: BTreeSet<u8> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| criterion_id(&c.name))
        .collect();
    let expected: BTreeSet<u8> = EXPECTED_FAILURES.into_iter().collect();
    let passing = 13 - failing.len();
    println!("acceptance: {passing}/13 criteria pass; failing {failing:?}, expected failing {expected:?}");
    if failing == expected {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing set differs from the expected set");
        ExitCode::FAILURE
    }
}
