//! Acceptance suite: runs the full verification battery at the default
//! configuration (order 10, weight cap 8) and requires every check to pass
//! exactly. One line is printed per check.

use cobord::verify::{run_all, CheckStatus, VerifyConfig};

#[test]
fn acceptance_suite_passes() {
    let config = VerifyConfig::default();
    let report = run_all(&config).expect("default configuration is valid");
    let mut failed = Vec::new();
    for check in &report.checks {
        let status = match check.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "skip",
        };
        println!("[{status}] {:32} {}", check.name, check.claim);
        if let Some(w) = &check.witness {
            println!("        witness: {w}");
        }
        if check.status == CheckStatus::Fail {
            failed.push(check.name.clone());
        }
    }
    assert!(failed.is_empty(), "failed checks: {failed:?}");
    assert!(report.all_passed());
}
