//! Gauss-Legendre rules on [-1, 1].
//!
//! Nodes are the roots of the Legendre polynomial P_n, found by Newton
//! iteration from the Tricomi initial guess; weights follow from the
//! derivative. For the node counts used here (32 and 128) the rule is
//! accurate to machine precision on the analytic integrands of this crate.

use std::sync::OnceLock;

/// P_n(x) and P_n'(x) via the three-term recurrence.
fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for j in 2..=n {
        let jf = j as f64;
        let p_next = ((2.0 * jf - 1.0) * x * p - (jf - 1.0) * p_prev) / jf;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// ascending in the node. `n` must be even (all callers here use even n,
/// which keeps the rule exactly symmetric).
pub fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 2 && n.is_multiple_of(2), "legendre_rule expects even n >= 2");
    let mut rule = vec![(0.0, 0.0); n];
    for i in 0..n / 2 {
        // Tricomi guess for the i-th root counted from +1.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..64 {
            let (p, d) = legendre_with_deriv(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                // one polishing step after convergence
                let (p2, d2) = legendre_with_deriv(n, x);
                x -= p2 / d2;
                dp = d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule[n - 1 - i] = (x, w);
        rule[i] = (-x, w);
    }
    rule
}

/// The 32-point rule used by the moment quadrature.
pub fn rule_32() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(32))
}

/// The 128-point rule used by the 2-D positivity oracle.
pub fn rule_128() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(128))
}
