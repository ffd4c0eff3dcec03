//! Independent reference implementations used by tests, the verification
//! suite, and a few runtime cross-checks.
//!
//! These are deliberately slow, simple, and structurally different from the
//! main paths: the moment oracle uses trapezoid sums with Richardson
//! extrapolation precisely because the main path is Gauss-Legendre, and the
//! minimizer oracle uses golden-section search instead of bisection on the
//! derivative. `quad_moment` never calls into the moments module;
//! `sign_scan` and `fd_check_b` do evaluate B, since what they validate is
//! zero counting and the closed-form derivatives, not B itself.

use crate::bcurve::{eval_b, eval_f, BEval};
use crate::error::{require_alpha, Error, Result};
use crate::gauss;
use crate::moments::{compute_moments, MIN_KMAX};

/// Largest |eta| the trapezoid oracle is trusted on.
pub const QUAD_ORACLE_RANGE: f64 = 500.0;
/// Largest |eta| for the 2-D positivity oracle.
pub const POSITIVITY_RANGE: f64 = 50.0;
/// Maximum Romberg refinement depth.
const MAX_ROMBERG_LEVELS: usize = 24;

/// Outcome of one named verification check.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub name: String,
    pub max_residual: f64,
    pub samples: usize,
    /// Tolerance the check was declared with; `passed` ⟺ `max_residual <= tolerance`.
    pub tolerance: f64,
    pub passed: bool,
}

impl OracleReport {
    pub fn new(name: &str, tolerance: f64, max_residual: f64, samples: usize) -> Self {
        OracleReport {
            name: name.to_owned(),
            max_residual,
            samples,
            tolerance,
            passed: max_residual <= tolerance,
        }
    }
}

/// Reference evaluation of the scaled moment (A_k for eta ≥ 0, e^{eta} A_k
/// for eta < 0, matching the main path) by trapezoid sums with Richardson
/// extrapolation, refined until the diagonal stabilizes to 1e-13 relative.
pub fn quad_moment(eta: f64, k: usize) -> Result<f64> {
    if !eta.is_finite() || eta.abs() > QUAD_ORACLE_RANGE {
        return Err(Error::OracleRange {
            eta,
            limit: QUAD_ORACLE_RANGE,
        });
    }
    // For eta < 0 integrate in u = 1 - z so the exponent eta·u(2-u) is
    // formed without cancellation near the layer.
    let f = |t: f64| -> f64 {
        if eta >= 0.0 {
            t.powi(k as i32) * (-eta * t * t).exp()
        } else {
            (1.0 - t).powi(k as i32) * (eta * t * (2.0 - t)).exp()
        }
    };

    let mut rows: Vec<Vec<f64>> = vec![vec![0.5 * (f(0.0) + f(1.0))]];
    let mut n: usize = 1;
    let mut h = 1.0f64;
    for level in 1..=MAX_ROMBERG_LEVELS {
        n *= 2;
        h *= 0.5;
        let mut odd_sum = 0.0;
        for j in (1..n).step_by(2) {
            odd_sum += f(j as f64 * h);
        }
        let mut row = vec![0.5 * rows[level - 1][0] + h * odd_sum];
        let mut pow4 = 1.0;
        for j in 1..=level {
            pow4 *= 4.0;
            let extrap = row[j - 1] + (row[j - 1] - rows[level - 1][j - 1]) / (pow4 - 1.0);
            row.push(extrap);
        }
        let diag = row[level];
        let prev_diag = rows[level - 1][level - 1];
        rows.push(row);
        if level >= 4 && (diag - prev_diag).abs() <= 1e-13 * diag.abs() {
            return Ok(diag);
        }
    }
    Err(Error::OracleNonConvergence {
        levels: MAX_ROMBERG_LEVELS,
    })
}

/// Number of strict sign changes of B(., alpha) between adjacent samples
/// on a uniform grid of n points over [lo, hi]. Samples that are exactly
/// zero (a grid point can land on a zero of B when the endpoints are round
/// numbers) are skipped, and the change is counted across them: a crossing
/// through a skipped zero still counts once, a tangential touch counts not
/// at all.
pub fn sign_scan(alpha: f64, lo: f64, hi: f64, n: usize) -> Result<usize> {
    require_alpha(alpha)?;
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::BadArgument(format!(
            "scan interval must satisfy lo < hi, got [{lo}, {hi}]"
        )));
    }
    if n < 1000 {
        return Err(Error::BadArgument(format!(
            "scan needs at least 1000 points, got {n}"
        )));
    }
    let step = (hi - lo) / (n - 1) as f64;
    let mut changes = 0usize;
    let mut prev = 0.0;
    for i in 0..n {
        let cur = eval_b(lo + step * i as f64, alpha)?.b;
        if prev * cur < 0.0 {
            changes += 1;
        }
        if cur != 0.0 {
            prev = cur;
        }
    }
    Ok(changes)
}

/// Golden-section minimization of f over [lo, hi], shrinking to interval
/// width 1e-12. Returns (eta, f(eta)) at the midpoint of the final interval.
pub fn golden_min_f(lo: f64, hi: f64) -> Result<(f64, f64)> {
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::BadArgument(format!(
            "golden-section bracket must satisfy lo < hi, got [{lo}, {hi}]"
        )));
    }
    const INVPHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = eval_f(c)?;
    let mut fd = eval_f(d)?;
    while b - a > 1e-12 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = eval_f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = eval_f(d)?;
        }
    }
    let eta = 0.5 * (a + b);
    Ok((eta, eval_f(eta)?))
}

/// The strictly increasing combination g(eta) = e^{eta}(A₀(A₄-A₆) - A₂(A₂-A₄)),
/// evaluated through the scaled representation: g = e^{|eta|} s₀² N where N
/// is the ratio-form numerator of f'. Safe for |eta| ≤ ~700.
fn increasing_combination(eta: f64) -> Result<f64> {
    let m = compute_moments(eta, MIN_KMAX)?;
    let s0 = m.scaled(0);
    Ok(eta.abs().exp() * s0 * s0 * crate::bcurve::f_prime_numerator(&m))
}

/// Two-route check of the positivity identity behind the uniqueness of the
/// f-minimizer:
///
/// * lhs: centered finite difference (h = 1e-4) of g(eta),
/// * rhs: 128² tensor Gauss-Legendre quadrature of
///   (1/2)(x²-y²)²(1-x²-y²)² e^{-eta(x²+y²-1)} over [0,1]².
///
/// Contract: rhs > 0 and |lhs - rhs| ≤ 1e-6 rhs. At eta = 0 the integral is
/// the exact rational 4/525.
pub fn positivity_2d(eta: f64) -> Result<(f64, f64)> {
    if !eta.is_finite() || eta.abs() > POSITIVITY_RANGE {
        return Err(Error::OracleRange {
            eta,
            limit: POSITIVITY_RANGE,
        });
    }
    let h = 1e-4;
    let lhs = (increasing_combination(eta + h)? - increasing_combination(eta - h)?) / (2.0 * h);

    let rule = gauss::rule_128();
    // map [-1,1] -> [0,1]
    let pts: Vec<(f64, f64)> = rule
        .iter()
        .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect();
    let mut rhs = 0.0;
    for &(x, wx) in &pts {
        let x2 = x * x;
        for &(y, wy) in &pts {
            let y2 = y * y;
            let d = x2 - y2;
            let s = 1.0 - x2 - y2;
            rhs += wx * wy * 0.5 * d * d * s * s * (-eta * (x2 + y2 - 1.0)).exp();
        }
    }
    if rhs <= 0.0 {
        return Err(Error::Internal(format!(
            "positivity oracle produced a non-positive integral at eta = {eta}: {rhs}"
        )));
    }
    Ok((lhs, rhs))
}

/// Relative deviation between the closed-form derivative of the given order
/// (1, 2, or 3) and a Richardson-improved centered finite difference of the
/// next-lower-order quantity. The deviation is normalized by
/// max(1, |closed|) so that points where the derivative vanishes are
/// compared absolutely.
pub fn fd_check_b(eta: f64, alpha: f64, order: u8) -> Result<f64> {
    require_alpha(alpha)?;
    if !(1..=3).contains(&order) {
        return Err(Error::BadArgument(format!(
            "derivative order must be 1, 2, or 3, got {order}"
        )));
    }
    let pick = |e: &BEval, j: u8| match j {
        0 => e.b,
        1 => e.b1,
        2 => e.b2,
        _ => e.b3,
    };
    let closed = pick(&eval_b(eta, alpha)?, order);
    let h = 1e-5 * eta.abs().max(1.0);
    let diff = |step: f64| -> Result<f64> {
        let plus = eval_b(eta + step, alpha)?;
        let minus = eval_b(eta - step, alpha)?;
        Ok((pick(&plus, order - 1) - pick(&minus, order - 1)) / (2.0 * step))
    };
    let d_h = diff(h)?;
    let d_h2 = diff(0.5 * h)?;
    let fd = (4.0 * d_h2 - d_h) / 3.0;
    Ok((closed - fd).abs() / closed.abs().max(1.0))
}

#[cfg(test)]
mod tests {
    // reference constants keep their full mpmath digits
    #![allow(clippy::excessive_precision)]
    use super::*;
    use approx::assert_relative_eq;

    /// Exact value of (1/2)∬(x²-y²)²(1-x²-y²)² dx dy over [0,1]², by
    /// term-by-term polynomial integration.
    pub const POSITIVITY_AT_ZERO: f64 = 4.0 / 525.0;
    // d/deta of e^{eta}(A₀(A₄-A₆)-A₂(A₂-A₄)) at eta = ±5 (mpmath).
    const G_PRIME_AT_MINUS_5: f64 = 0.0124222835663404;
    const G_PRIME_AT_5: f64 = 0.122341026790177;

    #[test]
    fn quad_moment_basics() {
        // A_4(0) = 1/5
        assert_relative_eq!(quad_moment(0.0, 4).unwrap(), 0.2, max_relative = 1e-13);
        // agreement with the main path is the assertion
        let m = compute_moments(1.0, 6).unwrap();
        assert_relative_eq!(quad_moment(1.0, 0).unwrap(), m.scaled(0), max_relative = 1e-12);
        // scaled value stays in (0,1) deep on the negative side
        let v = quad_moment(-100.0, 2).unwrap();
        assert!(v > 0.0 && v < 1.0);
        assert!(matches!(quad_moment(501.0, 0), Err(Error::OracleRange { .. })));
    }

    #[test]
    fn sign_scan_counts() {
        assert_eq!(sign_scan(10.0, -11.0, 6.0, 200_000).unwrap(), 2);
        assert_eq!(sign_scan(2.0, -3.0, 2.0, 100_000).unwrap(), 0);
        // at alpha = 7.5 the origin is a triple zero and produces a crossing
        assert_eq!(sign_scan(7.5, -8.0, 4.0, 100_000).unwrap(), 2);
        assert!(sign_scan(10.0, -1.0, 1.0, 10).is_err());
    }

    #[test]
    fn golden_section_localizes_minimum() {
        let (eta, f_val) = golden_min_f(-100.0, 0.0).unwrap();
        assert!(eta < 0.0);
        assert!(f_val < 7.5);
    }

    #[test]
    fn positivity_identity_two_routes() {
        let (lhs, rhs) = positivity_2d(0.0).unwrap();
        assert_relative_eq!(rhs, POSITIVITY_AT_ZERO, max_relative = 1e-10);
        assert!((lhs - rhs).abs() <= 1e-6 * rhs);

        let (lhs, rhs) = positivity_2d(-5.0).unwrap();
        assert!(rhs > 0.0);
        assert!((lhs - rhs).abs() <= 1e-6 * rhs);
        assert_relative_eq!(rhs, G_PRIME_AT_MINUS_5, max_relative = 1e-8);

        let (lhs, rhs) = positivity_2d(5.0).unwrap();
        assert!((lhs - rhs).abs() <= 1e-6 * rhs);
        assert_relative_eq!(rhs, G_PRIME_AT_5, max_relative = 1e-8);

        assert!(matches!(positivity_2d(51.0), Err(Error::OracleRange { .. })));
    }

    #[test]
    fn fd_check_examples() {
        assert!(fd_check_b(0.0, 7.5, 3).unwrap() < 1e-5);
        assert!(fd_check_b(0.0, 10.0, 2).unwrap() < 1e-6);
        assert!(fd_check_b(3.0, 5.0, 1).unwrap() < 1e-5);
        assert!(fd_check_b(1.0, 1.0, 4).is_err());
    }

    #[test]
    fn report_pass_flag_matches_tolerance() {
        assert!(OracleReport::new("x", 1e-6, 1e-7, 3).passed);
        assert!(!OracleReport::new("x", 1e-6, 1e-5, 3).passed);
    }
}
