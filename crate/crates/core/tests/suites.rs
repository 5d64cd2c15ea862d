use photoloc::suites::{run_suite, Suite};

#[test]
fn every_suite_passes_and_is_reproducible() {
    for suite in Suite::ALL {
        let report = run_suite(suite, 7);
        for check in report.checks.iter().filter(|c| !c.pass) {
            eprintln!("{suite}: {check:?}");
        }
        assert!(report.pass, "{suite} failed");
        if matches!(suite, Suite::Lorentz | Suite::Invariance | Suite::Residual) {
            assert_eq!(run_suite(suite, 7), report);
        }
    }
}

#[test]
fn seeds_change_the_sample() {
    assert_ne!(run_suite(Suite::Residual, 1), run_suite(Suite::Residual, 2));
}
