//! The full verification battery must pass end to end.

#[test]
fn verification_battery_passes() {
    let reports = ms_kit_core::verify::run_all().expect("classifier construction");
    let mut failed = Vec::new();
    for r in &reports {
        println!(
            "{:32} max_residual={:<13.3e} tol={:<10.1e} samples={:<5} {}",
            r.name,
            r.max_residual,
            r.tolerance,
            r.samples,
            if r.passed { "PASS" } else { "FAIL" }
        );
        if !r.passed {
            failed.push(r.name.clone());
        }
    }
    assert!(reports.len() >= 20, "battery shrank: {}", reports.len());
    assert!(failed.is_empty(), "failed checks: {failed:?}");
}
