//! Scaled Boltzmann moments A_k(eta) = ∫₀¹ z^k e^{-eta z²} dz.
//!
//! Everything downstream consumes only the ratios r_k = A_k/A₀ and the
//! quantity q = e^{-eta}/A₀, both of which stay of moderate size over the
//! whole parameter range. The raw moments do not: A_k grows like
//! e^{|eta|}/(2|eta|) for eta < 0 and would overflow near eta ≈ -710. We
//! therefore store
//!
//! * A_k(eta) itself for eta ≥ 0 (each in (0, 1]), and
//! * e^{eta} A_k(eta) = ∫₀¹ z^k e^{eta (1-z²)} dz for eta < 0 (also in (0, 1]).
//!
//! Ratios and q are scale-free, so the representations are interchangeable
//! for every consumer.
//!
//! Evaluation uses a Taylor series for |eta| ≤ 0.5 and composite 32-point
//! Gauss-Legendre quadrature otherwise. Panels are laid out so that the
//! exponent of the integrand varies by at most a fixed budget per panel:
//! the integrand concentrates in a layer near z = 0 (eta > 0) or z = 1
//! (eta < 0), and resolving that layer is all the rule needs. The eta < 0
//! side is integrated in u = 1 - z, which avoids the catastrophic
//! cancellation of evaluating 1 - z² next to z = 1. Quadrature results are
//! confirmed by one panel-halving refinement.
//!
//! The integration-by-parts recurrence (k+1) A_k - 2 eta A_{k+2} = e^{-eta}
//! is never used to generate moments (forward use cancels catastrophically);
//! it is exposed as a residual diagnostic instead.

use crate::error::{Error, Result};
use crate::gauss;

/// Smallest admissible truncation order; B and f need ratios up to r₆.
pub const MIN_KMAX: usize = 6;

/// |eta| at or below which the Taylor series path is used.
pub const SERIES_CUTOVER: f64 = 0.5;

/// Maximum exponent swing allowed on one quadrature panel.
const EXPONENT_BUDGET: f64 = 8.0;
/// The layer is resolved until the integrand has decayed by e^{-48};
/// beyond that, geometrically growing panels mop up the tail.
const EXPONENT_CAP: f64 = 48.0;
/// Guard tolerance for the panel-halving refinement check.
const REFINE_REL_TOL: f64 = 1e-11;

/// Scaled moments, ratios, and q at one value of eta.
///
/// Construction goes through [`compute_moments`], which guarantees the
/// internal consistency of the fields (ratios derived from the scaled
/// values, r₀ = 1 exactly, q matching the stored representation).
#[derive(Debug, Clone)]
pub struct MomentSet {
    eta: f64,
    kmax: usize,
    scaled: Vec<f64>,
    ratios: Vec<f64>,
    q: f64,
    log_q: f64,
}

impl MomentSet {
    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    /// Stored scaled moment: A_k for eta ≥ 0, e^{eta} A_k for eta < 0.
    pub fn scaled(&self, k: usize) -> f64 {
        self.scaled[k]
    }

    /// Ratio r_k = A_k/A₀ (scale-free).
    pub fn ratio(&self, k: usize) -> f64 {
        self.ratios[k]
    }

    /// q = e^{-eta}/A₀. Positive for every eta mathematically; in binary64
    /// the true value underflows to 0 for eta beyond about 745 (it is below
    /// the smallest subnormal there). [`MomentSet::log_q`] stays finite over
    /// the whole range.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// ln q, finite for all representable eta.
    pub fn log_q(&self) -> f64 {
        self.log_q
    }

    /// Raw moment A_k. Overflows to +inf for eta below about -709; prefer
    /// ratios or scaled values wherever possible.
    pub fn raw(&self, k: usize) -> f64 {
        if self.eta >= 0.0 {
            self.scaled[k]
        } else {
            self.scaled[k] * (-self.eta).exp()
        }
    }

    /// Normalized residual of the integration-by-parts recurrence in the
    /// stored scaling: |(k+1) s_k - 2 eta s_{k+2} - E| / max(|s_k|, E),
    /// where E = e^{-eta} for eta ≥ 0 and E = 1 for eta < 0.
    pub fn recurrence_residual(&self, k: usize) -> f64 {
        assert!(k + 2 <= self.kmax, "recurrence needs s_{{k+2}}");
        let s_k = self.scaled[k];
        let s_k2 = self.scaled[k + 2];
        let e = if self.eta >= 0.0 { (-self.eta).exp() } else { 1.0 };
        (((k + 1) as f64) * s_k - 2.0 * self.eta * s_k2 - e).abs() / s_k.abs().max(e)
    }
}

fn validate(eta: f64, kmax: usize) -> Result<()> {
    if !eta.is_finite() {
        return Err(Error::NonFiniteEta { eta });
    }
    if kmax < MIN_KMAX || !kmax.is_multiple_of(2) {
        return Err(Error::BadKmax { kmax });
    }
    Ok(())
}

/// Computes the scaled moment set at `eta` for k = 0..=kmax.
///
/// Relative accuracy of ratios and q is at the 1e-15 level over
/// |eta| ≤ 1e4 (contract: 1e-12), limited only by binary64 round-off.
pub fn compute_moments(eta: f64, kmax: usize) -> Result<MomentSet> {
    validate(eta, kmax)?;
    let scaled = if eta.abs() <= SERIES_CUTOVER {
        series_scaled(eta, kmax)
    } else {
        quadrature_scaled(eta, kmax)?
    };
    let s0 = scaled[0];
    let ratios: Vec<f64> = scaled.iter().map(|s| s / s0).collect();
    let (q, log_q) = if eta >= 0.0 {
        ((-eta).exp() / s0, -eta - s0.ln())
    } else {
        (1.0 / s0, -s0.ln())
    };
    Ok(MomentSet {
        eta,
        kmax,
        scaled,
        ratios,
        q,
        log_q,
    })
}

/// Default centered-difference step for derivative diagnostics.
pub fn default_fd_step(eta: f64) -> f64 {
    1e-5 * eta.abs().max(1.0)
}

/// Residual of the identity ∂A_k/∂eta = -A_{k+2} against a centered finite
/// difference, normalized by A₀ (eta ≥ 0) or the scaled s₀ (eta < 0).
/// Contract: ≤ 1e-6 for |eta| ≤ 100 with the default step.
pub fn moment_derivative_check(eta: f64, k: usize, h: f64) -> Result<f64> {
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::BadStep { h });
    }
    let kmax = (k + 2).max(MIN_KMAX);
    let kmax = if kmax.is_multiple_of(2) { kmax } else { kmax + 1 };
    let center = compute_moments(eta, kmax)?;
    let plus = compute_moments(eta + h, kmax)?;
    let minus = compute_moments(eta - h, kmax)?;
    if eta >= 0.0 {
        // raw form: d/deta A_k + A_{k+2} = 0
        let fd = (plus.raw(k) - minus.raw(k)) / (2.0 * h);
        Ok(((fd + center.raw(k + 2)) / center.raw(0)).abs())
    } else {
        // scaled form: S_k = e^{eta} A_k satisfies S_k' = S_k - S_{k+2}
        let s = |m: &MomentSet, j: usize| {
            if m.eta() >= 0.0 {
                m.scaled(j) * m.eta().exp()
            } else {
                m.scaled(j)
            }
        };
        let fd = (s(&plus, k) - s(&minus, k)) / (2.0 * h);
        Ok(((fd - (s(&center, k) - s(&center, k + 2))) / s(&center, 0)).abs())
    }
}

/// Taylor-series path, valid for small |eta|:
/// A_k = Σ_{n≥0} (-eta)^n / (n! (2n+k+1)), returned in the crate scaling.
/// Exposed for the series/quadrature handover diagnostics.
pub fn series_scaled_moments(eta: f64, kmax: usize) -> Result<Vec<f64>> {
    validate(eta, kmax)?;
    Ok(series_scaled(eta, kmax))
}

/// Quadrature path in the crate scaling, exposed for the handover
/// diagnostics. Valid for any finite eta.
pub fn quadrature_scaled_moments(eta: f64, kmax: usize) -> Result<Vec<f64>> {
    validate(eta, kmax)?;
    quadrature_scaled(eta, kmax)
}

fn series_scaled(eta: f64, kmax: usize) -> Vec<f64> {
    let scale = if eta < 0.0 { eta.exp() } else { 1.0 };
    (0..=kmax)
        .map(|k| {
            let mut sum = 0.0;
            let mut coeff = 1.0; // (-eta)^n / n!
            let mut n = 0usize;
            loop {
                let term = coeff / ((2 * n + k + 1) as f64);
                sum += term;
                if term.abs() < 1e-18 && n >= 2 {
                    break;
                }
                n += 1;
                coeff *= -eta / n as f64;
                if n > 120 {
                    break; // unreachable for |eta| near the cutover
                }
            }
            sum * scale
        })
        .collect()
}

/// Panel breakpoints on [0, 1] in the integration variable: z itself for
/// eta ≥ 0, u = 1 - z for eta < 0. The layer (where the exponent runs from
/// 0 up to EXPONENT_CAP) is cut into panels of equal exponent swing; the
/// flat tail is covered by geometrically growing panels.
fn panel_breaks(eta: f64) -> Vec<f64> {
    let a = eta.abs();
    if a <= EXPONENT_BUDGET {
        return vec![0.0, 1.0];
    }
    let cap = a.min(EXPONENT_CAP);
    let mut pts = vec![0.0];
    let mut phi = EXPONENT_BUDGET;
    loop {
        let p = phi.min(cap);
        let t = if eta >= 0.0 {
            // exponent profile eta z²
            (p / a).sqrt()
        } else {
            // exponent profile |eta| u (2-u); cancellation-free inverse
            p / (a * (1.0 + (1.0 - p / a).max(0.0).sqrt()))
        };
        if t > *pts.last().unwrap() {
            pts.push(t);
        }
        if p >= cap {
            break;
        }
        phi += EXPONENT_BUDGET;
    }
    let mut t = *pts.last().unwrap();
    while t < 1.0 {
        t = (2.0 * t).min(1.0);
        pts.push(t);
    }
    pts
}

fn halved(breaks: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(breaks.len() * 2 - 1);
    for w in breaks.windows(2) {
        out.push(w[0]);
        out.push(0.5 * (w[0] + w[1]));
    }
    out.push(*breaks.last().unwrap());
    out
}

/// One composite Gauss-Legendre pass over the given breakpoints, returning
/// all powers k = 0..=kmax at once (the exponential dominates the cost).
fn quadrature_pass(eta: f64, kmax: usize, breaks: &[f64]) -> Vec<f64> {
    let rule = gauss::rule_32();
    let mut acc = vec![0.0; kmax + 1];
    for w in breaks.windows(2) {
        let c = 0.5 * (w[1] - w[0]);
        let m = 0.5 * (w[1] + w[0]);
        for &(x, wt) in rule {
            let t = m + c * x;
            let (z, weight) = if eta >= 0.0 {
                (t, wt * c * (-eta * t * t).exp())
            } else {
                // t is u = 1-z; eta (1-z²) = eta u (2-u)
                (1.0 - t, wt * c * (eta * t * (2.0 - t)).exp())
            };
            let mut zk = 1.0;
            for a in acc.iter_mut() {
                *a += weight * zk;
                zk *= z;
            }
        }
    }
    acc
}

fn quadrature_scaled(eta: f64, kmax: usize) -> Result<Vec<f64>> {
    let breaks = panel_breaks(eta);
    let coarse = quadrature_pass(eta, kmax, &breaks);
    let fine = quadrature_pass(eta, kmax, &halved(&breaks));
    for k in 0..=kmax {
        if (coarse[k] - fine[k]).abs() > REFINE_REL_TOL * fine[k].abs() {
            return Err(Error::Internal(format!(
                "moment quadrature refinement check failed at eta = {eta}, k = {k}: \
                 coarse {} vs refined {}",
                coarse[k], fine[k]
            )));
        }
    }
    Ok(fine)
}

#[cfg(test)]
mod tests {
    // reference constants keep their full mpmath digits
    #![allow(clippy::excessive_precision)]
    use super::*;
    use approx::assert_relative_eq;

    // Reference values computed with mpmath at 30 significant digits.
    const A0_AT_5: f64 = 0.39571230961051354205;
    const A2_AT_5: f64 = 0.038897436261142807495;
    const A0_AT_1: f64 = 0.7468241328124270254;
    const Q_AT_5: f64 = 0.017027387916533109886;
    const R2_AT_MINUS_3: f64 = 0.62618539591008282512;
    const Q_AT_MINUS_3: f64 = 4.7571123754604969507;
    const S4_AT_MINUS_10: f64 = 0.042897781857446762336;

    #[test]
    fn eta_zero_gives_exact_rational_limits() {
        let m = compute_moments(0.0, 6).unwrap();
        assert_eq!(m.ratio(0), 1.0);
        assert!((m.ratio(2) - 1.0 / 3.0).abs() < 1e-15);
        assert!((m.ratio(4) - 1.0 / 5.0).abs() < 1e-15);
        assert!((m.ratio(6) - 1.0 / 7.0).abs() < 1e-15);
        assert!((m.q() - 1.0).abs() < 1e-15);
        assert_eq!(m.log_q(), 0.0);
    }

    #[test]
    fn positive_eta_reference_values() {
        let m = compute_moments(5.0, 6).unwrap();
        assert_relative_eq!(m.scaled(0), A0_AT_5, max_relative = 1e-14);
        assert_relative_eq!(m.scaled(2), A2_AT_5, max_relative = 1e-14);
        assert_relative_eq!(m.q(), Q_AT_5, max_relative = 1e-13);
        let m1 = compute_moments(1.0, 6).unwrap();
        assert_relative_eq!(m1.scaled(0), A0_AT_1, max_relative = 1e-14);
    }

    #[test]
    fn recurrence_residual_at_eta_5() {
        // A0 - 10 A2 = e^{-5}
        let m = compute_moments(5.0, 6).unwrap();
        assert!(m.recurrence_residual(0) < 1e-12);
        let direct = (m.scaled(0) - 10.0 * m.scaled(2) - (-5.0f64).exp()).abs();
        assert!(direct < 1e-12 * m.scaled(0).max((-5.0f64).exp()));
    }

    #[test]
    fn negative_eta_reference_values() {
        let m = compute_moments(-3.0, 6).unwrap();
        assert_relative_eq!(m.ratio(2), R2_AT_MINUS_3, max_relative = 1e-13);
        assert_relative_eq!(m.q(), Q_AT_MINUS_3, max_relative = 1e-13);
        let m10 = compute_moments(-10.0, 6).unwrap();
        assert_relative_eq!(m10.scaled(4), S4_AT_MINUS_10, max_relative = 1e-13);
    }

    #[test]
    fn negative_eta_agrees_with_trapezoid_oracle() {
        let m = compute_moments(-3.0, 6).unwrap();
        let a0 = crate::oracle::quad_moment(-3.0, 0).unwrap();
        let a2 = crate::oracle::quad_moment(-3.0, 2).unwrap();
        assert_relative_eq!(m.ratio(2), a2 / a0, max_relative = 1e-12);
        assert_relative_eq!(m.q(), 1.0 / a0, max_relative = 1e-12);
    }

    #[test]
    fn extreme_negative_eta_stays_finite() {
        let m = compute_moments(-2000.0, 6).unwrap();
        assert!(m.q() > 0.0 && m.q().is_finite());
        assert!(m.log_q().is_finite());
        for k in [2, 4, 6] {
            let r = m.ratio(k);
            assert!(r > 0.0 && r < 1.0 && r.is_finite());
            assert!(m.scaled(k).is_finite());
        }
        // Step-1 style bound: 0 < 3q <= 3(1 - 2 eta)
        assert!(3.0 * m.q() <= 3.0 * (1.0 - 2.0 * (-2000.0)));
    }

    #[test]
    fn extreme_positive_eta_recurrence_holds() {
        let m = compute_moments(1e4, 6).unwrap();
        for k in [0, 2, 4] {
            assert!(m.recurrence_residual(k) < 1e-12);
        }
        assert!(m.log_q().is_finite());
    }

    #[test]
    fn ratio_ordering_strict() {
        for eta in [-1e4, -500.0, -5.0, -0.45, 0.0, 0.45, 5.0, 500.0, 1e4] {
            let m = compute_moments(eta, 8).unwrap();
            let mut prev = 1.0;
            for k in [2, 4, 6, 8] {
                let r = m.ratio(k);
                assert!(r > 0.0 && r < prev, "eta={eta} k={k}: {r} !< {prev}");
                prev = r;
            }
        }
    }

    #[test]
    fn derivative_check_examples() {
        // dA0/deta at 0 is -A2(0) = -1/3
        assert!(moment_derivative_check(0.0, 0, 1e-5).unwrap() < 1e-6);
        assert!(moment_derivative_check(2.0, 2, 1e-5).unwrap() < 1e-6);
        assert!(moment_derivative_check(-10.0, 4, 1e-4).unwrap() < 1e-5);
    }

    #[test]
    fn series_and_quadrature_agree_on_handover_band() {
        for &eta in &[0.4, 0.45, 0.5, 0.55, 0.6, -0.4, -0.45, -0.5, -0.55, -0.6] {
            let s = series_scaled_moments(eta, 6).unwrap();
            let g = quadrature_scaled_moments(eta, 6).unwrap();
            for k in 0..=6 {
                assert_relative_eq!(s[k], g[k], max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn argument_errors() {
        assert!(matches!(
            compute_moments(f64::NAN, 6),
            Err(Error::NonFiniteEta { .. })
        ));
        assert!(matches!(
            compute_moments(f64::INFINITY, 6),
            Err(Error::NonFiniteEta { .. })
        ));
        assert!(matches!(compute_moments(1.0, 5), Err(Error::BadKmax { .. })));
        assert!(matches!(compute_moments(1.0, 4), Err(Error::BadKmax { .. })));
        assert!(matches!(
            moment_derivative_check(1.0, 0, 0.0),
            Err(Error::BadStep { .. })
        ));
    }
}
