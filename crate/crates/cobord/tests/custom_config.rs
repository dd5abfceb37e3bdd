//! The battery also holds for a non-standard multiplication and
//! orientation: the value-pinned assertions step aside, but every
//! structural identity must still pass.

use cobord::verify::{run_all, CheckStatus, VerifyConfig};

#[test]
fn suite_holds_for_twisted_data() {
    let config = VerifyConfig {
        omega: Some("9*b1^2 - 8*b2".into()),
        orientation: Some("u + b1*u^2 + b3*u^4".into()),
        ..VerifyConfig::default()
    };
    let report = run_all(&config).expect("valid configuration");
    for check in &report.checks {
        assert_ne!(
            check.status,
            CheckStatus::Fail,
            "{} failed: {:?}",
            check.name,
            check.witness
        );
    }
    assert!(report.all_passed());
}
