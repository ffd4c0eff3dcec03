//! Zero classification of B(., alpha), the critical intensities, and
//! bifurcation sweeps.
//!
//! Root finding works on f(eta) = A₀/(A₂-A₄) rather than on B: the nonzero
//! zeros of B are exactly the solutions of f(eta) = alpha, and f is strictly
//! monotone on each side of its unique minimizer eta_min, so bisection is
//! globally convergent and cannot miss paired roots. B itself has double or
//! tangential zeros exactly where bisection would fail; it is evaluated only
//! to confirm residuals.
//!
//! The five regimes of the zero set over alpha > 0:
//!
//! * (i)   alpha > 7.5:            zeros eta*₁ < 0, 0, eta*₂ > 0
//! * (ii)  alpha = 7.5:            zeros eta*₁ < 0, 0 (origin triple)
//! * (iii) alpha* < alpha < 7.5:   zeros eta*₁ < eta*₂ < 0, and 0
//! * (iv)  alpha = alpha*:         zeros eta_min < 0 (double), and 0
//! * (v)   alpha < alpha*:         only 0
//!
//! with alpha* = f(eta_min) ∈ (20/3, 7.5).

use std::fmt;

use crate::bcurve::{eval_b_with, eval_f_prime, eval_f_with, f_prime_numerator};
use crate::error::{require_alpha, Error, Result};
use crate::moments::{compute_moments, MIN_KMAX};
use crate::oracle;

/// Width band around the boundary intensities 7.5 and alpha* inside which
/// the exact-boundary case labels (ii)/(iv) are returned.
pub const ALPHA_BOUNDARY_EPS: f64 = 1e-9;
/// Zero-residual contract: every returned zero satisfies
/// |B(eta, alpha)| ≤ ZERO_B_TOL (1 + eta²).
pub const ZERO_B_TOL: f64 = 1e-9;
/// Threshold on the closed-form derivatives deciding zero multiplicity.
pub const MULTIPLICITY_DERIV_TOL: f64 = 1e-8;
/// Relative bisection bracket width.
const BRACKET_REL_WIDTH: f64 = 1e-13;
/// Bracket expansion hard stop for the eta_min search.
const ETA_MIN_SEARCH_LIMIT: f64 = -1e3;

/// Which side of the origin a zero lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Negative,
    Origin,
    Positive,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Negative => "negative",
            Side::Origin => "origin",
            Side::Positive => "positive",
        })
    }
}

/// One zero of B(., alpha).
#[derive(Debug, Clone)]
pub struct ZeroRecord {
    pub eta: f64,
    /// Order of the first non-vanishing eta-derivative of B at the zero.
    pub multiplicity: u32,
    /// Certified enclosing interval. For simple zeros this is the final
    /// bisection bracket of f - alpha (which changes sign there); for the
    /// origin it is the exact point; for the tangential zero at
    /// alpha = alpha* it is the bracket of the f'-numerator, which changes
    /// sign at eta_min while f - alpha does not.
    pub bracket: (f64, f64),
    pub side: Side,
}

/// Case labels of the zero-count regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseLabel {
    I,
    II,
    III,
    IV,
    V,
    /// Reserved: unreachable under the boundary-band policy (alphas inside
    /// the band get the exact-boundary labels), kept for the type contract.
    BoundaryAmbiguous,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseLabel::I => "i",
            CaseLabel::II => "ii",
            CaseLabel::III => "iii",
            CaseLabel::IV => "iv",
            CaseLabel::V => "v",
            CaseLabel::BoundaryAmbiguous => "boundary-ambiguous",
        })
    }
}

/// The classified zero set of B(., alpha), zeros ascending in eta.
#[derive(Debug, Clone)]
pub struct ZeroSet {
    pub alpha: f64,
    pub zeros: Vec<ZeroRecord>,
    pub case_label: CaseLabel,
}

/// The f-minimizer and the critical intensity alpha* = f(eta_min).
#[derive(Debug, Clone, Copy)]
pub struct CriticalData {
    pub eta_min: f64,
    pub alpha_star: f64,
    /// Numerical convexity witness: Richardson finite difference of f' at
    /// eta_min, strictly positive.
    pub f_second_at_min: f64,
}

/// Branch identity in a bifurcation sweep. The inner branch continues from
/// negative eta (case iii) through the origin at alpha = 7.5 into positive
/// eta (case i), hence its combined name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Branch {
    Iso,
    OuterNegative,
    Inner,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Iso => "iso",
            Branch::OuterNegative => "neg1",
            Branch::Inner => "neg2/pos",
        })
    }
}

/// One row of a bifurcation sweep.
#[derive(Debug, Clone)]
pub struct BranchRow {
    pub alpha: f64,
    pub branch: Branch,
    pub eta: f64,
    /// Scalar order parameter S = -eta/alpha (0 on the isotropic branch).
    pub order_parameter: f64,
    pub case_label: CaseLabel,
}

/// Sweep rows sorted by (alpha, branch name).
#[derive(Debug, Clone)]
pub struct BranchTable {
    pub rows: Vec<BranchRow>,
}

impl BranchTable {
    /// Assembles rows from per-alpha zero sets. Branch identity of a
    /// nonzero root is decided by its side of eta_min; the tangential
    /// zero at alpha = alpha* is reported on the outer branch.
    pub fn from_zero_sets(sets: &[ZeroSet], eta_min: f64) -> BranchTable {
        let mut rows = Vec::new();
        for set in sets {
            for z in &set.zeros {
                let (branch, eta) = match z.side {
                    Side::Origin => (Branch::Iso, 0.0),
                    _ if z.eta <= eta_min => (Branch::OuterNegative, z.eta),
                    _ => (Branch::Inner, z.eta),
                };
                let mut s = -eta / set.alpha;
                if s == 0.0 {
                    s = 0.0; // normalize -0
                }
                rows.push(BranchRow {
                    alpha: set.alpha,
                    branch,
                    eta,
                    order_parameter: s,
                    case_label: set.case_label,
                });
            }
        }
        rows.sort_by(|a, b| {
            a.alpha
                .partial_cmp(&b.alpha)
                .unwrap()
                .then(a.branch.cmp(&b.branch))
        });
        BranchTable { rows }
    }
}

/// Bisection on a sign change of g, shrinking to relative width
/// BRACKET_REL_WIDTH. Requires g(lo) and g(hi) of opposite sign.
fn bisect<G>(g: G, mut lo: f64, mut hi: f64, mut g_lo: f64) -> Result<(f64, f64)>
where
    G: Fn(f64) -> Result<f64>,
{
    loop {
        let width_target = BRACKET_REL_WIDTH * lo.abs().max(hi.abs()).max(1.0);
        if hi - lo <= width_target {
            return Ok((lo, hi));
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok((lo, hi)); // f64 resolution exhausted
        }
        let g_mid = g(mid)?;
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
}

/// Certified bracket for the unique root of the f'-numerator
/// N(eta) = (r₄-r₆) - r₂(r₂-r₄): N < 0 left of eta_min, N > 0 right of it.
/// The search starts on [-8, 0] and expands left geometrically.
fn eta_min_bracket() -> Result<(f64, f64)> {
    let n = |eta: f64| -> Result<f64> {
        let m = compute_moments(eta, MIN_KMAX)?;
        Ok(f_prime_numerator(&m))
    };
    let n_hi = n(0.0)?; // exact rational value 4/315 > 0
    if n_hi <= 0.0 {
        return Err(Error::Internal(format!(
            "f'-numerator at 0 should be 4/315 > 0, got {n_hi}"
        )));
    }
    let mut lo = -8.0;
    let mut n_lo = n(lo)?;
    while n_lo >= 0.0 {
        lo *= 2.0;
        if lo < ETA_MIN_SEARCH_LIMIT {
            return Err(Error::Internal(format!(
                "no sign change of the f'-numerator above eta = {ETA_MIN_SEARCH_LIMIT}; \
                 this indicates a moments bug"
            )));
        }
        n_lo = n(lo)?;
    }
    bisect(n, lo, 0.0, n_lo)
}

/// The unique minimizer of f, as the root of the f'-numerator.
pub fn find_eta_min() -> Result<f64> {
    let (lo, hi) = eta_min_bracket()?;
    Ok(0.5 * (lo + hi))
}

fn critical_from_bracket(bracket: (f64, f64)) -> Result<CriticalData> {
    let eta_min = 0.5 * (bracket.0 + bracket.1);
    let m = compute_moments(eta_min, MIN_KMAX)?;
    let alpha_star = eval_f_with(&m);

    // convexity witness: Richardson centered difference of f'
    let h = 1e-5 * eta_min.abs().max(1.0);
    let fd = |step: f64| -> Result<f64> {
        Ok((eval_f_prime(eta_min + step)? - eval_f_prime(eta_min - step)?) / (2.0 * step))
    };
    let f_second_at_min = (4.0 * fd(0.5 * h)? - fd(h)?) / 3.0;
    if f_second_at_min.is_nan() || f_second_at_min <= 0.0 {
        return Err(Error::Internal(format!(
            "convexity witness failed: f''(eta_min) = {f_second_at_min}"
        )));
    }

    // independent golden-section confirmation
    let (_, golden_value) = oracle::golden_min_f(-100.0, 0.0)?;
    if (golden_value - alpha_star).abs() > 1e-8 {
        return Err(Error::Internal(format!(
            "critical intensity disagreement: bisection path {alpha_star} vs \
             golden-section oracle {golden_value}"
        )));
    }

    if eta_min.is_nan() || eta_min >= 0.0 {
        return Err(Error::Internal(format!(
            "eta_min should be negative, got {eta_min}"
        )));
    }
    if alpha_star.is_nan() || alpha_star <= 20.0 / 3.0 || alpha_star >= 7.5 {
        return Err(Error::Internal(format!(
            "alpha* = {alpha_star} escaped (20/3, 7.5)"
        )));
    }

    Ok(CriticalData {
        eta_min,
        alpha_star,
        f_second_at_min,
    })
}

/// Computes the critical pair (eta_min, alpha*) with the golden-section
/// cross-check and the (20/3, 7.5) inclusion enforced.
pub fn critical_alpha() -> Result<CriticalData> {
    critical_from_bracket(eta_min_bracket()?)
}

/// Zero classifier. Construction computes the critical data once; the
/// classifier is then immutable and safe to share across threads.
#[derive(Debug, Clone)]
pub struct Classifier {
    critical: CriticalData,
    eta_min_bracket: (f64, f64),
}

impl Classifier {
    pub fn new() -> Result<Self> {
        let bracket = eta_min_bracket()?;
        let critical = critical_from_bracket(bracket)?;
        Ok(Classifier {
            critical,
            eta_min_bracket: bracket,
        })
    }

    pub fn critical(&self) -> &CriticalData {
        &self.critical
    }

    /// Locates and labels every zero of B(., alpha).
    pub fn classify(&self, alpha: f64) -> Result<ZeroSet> {
        require_alpha(alpha)?;
        let alpha_star = self.critical.alpha_star;

        let mut zeros = vec![self.origin_record(alpha)?];
        let case_label;
        if alpha < alpha_star - ALPHA_BOUNDARY_EPS {
            case_label = CaseLabel::V;
        } else if (alpha - alpha_star).abs() <= ALPHA_BOUNDARY_EPS {
            zeros.push(self.tangential_record(alpha)?);
            case_label = CaseLabel::IV;
        } else {
            zeros.push(self.nonzero_root(alpha, false)?);
            if (alpha - 7.5).abs() <= ALPHA_BOUNDARY_EPS {
                // the right-hand f-root coincides with the origin (f(0) = 7.5)
                case_label = CaseLabel::II;
            } else {
                zeros.push(self.nonzero_root(alpha, true)?);
                case_label = if alpha > 7.5 { CaseLabel::I } else { CaseLabel::III };
            }
        }
        zeros.sort_by(|a, b| a.eta.partial_cmp(&b.eta).unwrap());
        Ok(ZeroSet {
            alpha,
            zeros,
            case_label,
        })
    }

    /// Classifies `steps` grid intensities over [alpha_min, alpha_max] and
    /// assembles the branch table.
    pub fn sweep(&self, alpha_min: f64, alpha_max: f64, steps: usize) -> Result<BranchTable> {
        let sets = self.sweep_zero_sets(alpha_min, alpha_max, steps)?;
        Ok(BranchTable::from_zero_sets(&sets, self.critical.eta_min))
    }

    /// The classified zero sets along a sweep grid, in grid order. Split out
    /// so concurrent callers can classify grid points in parallel and still
    /// assemble rows through [`BranchTable::from_zero_sets`].
    pub fn sweep_zero_sets(
        &self,
        alpha_min: f64,
        alpha_max: f64,
        steps: usize,
    ) -> Result<Vec<ZeroSet>> {
        if !alpha_min.is_finite()
            || !alpha_max.is_finite()
            || alpha_min <= 0.0
            || alpha_max <= alpha_min
            || steps < 2
        {
            return Err(Error::BadArgument(format!(
                "sweep needs 0 < alpha_min < alpha_max and steps >= 2, \
                 got [{alpha_min}, {alpha_max}] with {steps} steps"
            )));
        }
        self.sweep_grid(alpha_min, alpha_max, steps)
            .iter()
            .map(|&a| self.classify(a))
            .collect()
    }

    /// The sweep grid itself (uniform, endpoints included).
    pub fn sweep_grid(&self, alpha_min: f64, alpha_max: f64, steps: usize) -> Vec<f64> {
        (0..steps)
            .map(|i| alpha_min + (alpha_max - alpha_min) * i as f64 / (steps - 1) as f64)
            .collect()
    }

    /// Compares the classifier's zero count against a dense sign scan of B
    /// on [-alpha-1, alpha/2+1] (2e5 points). The origin's double zero
    /// produces no sign change and is added analytically. Tangential zeros
    /// near alpha = 7.5 or alpha = alpha* cannot be certified by a scan, so
    /// those alphas are rejected as inconclusive.
    pub fn zero_count_oracle_check(&self, alpha: f64) -> Result<bool> {
        require_alpha(alpha)?;
        if (alpha - 7.5).abs() <= 1e-6 || (alpha - self.critical.alpha_star).abs() <= 1e-6 {
            return Err(Error::ScanInconclusive { alpha });
        }
        let changes = oracle::sign_scan(alpha, -alpha - 1.0, alpha / 2.0 + 1.0, 200_000)?;
        let classified = self.classify(alpha)?.zeros.len();
        Ok(changes + 1 == classified)
    }

    fn origin_record(&self, alpha: f64) -> Result<ZeroRecord> {
        let m = compute_moments(0.0, MIN_KMAX)?;
        let e = eval_b_with(&m, alpha);
        // b1(0, alpha) = 0 always; b2(0, alpha) = 0 only at alpha = 7.5
        let multiplicity = if e.b2.abs() > MULTIPLICITY_DERIV_TOL { 2 } else { 3 };
        Ok(ZeroRecord {
            eta: 0.0,
            multiplicity,
            bracket: (0.0, 0.0),
            side: Side::Origin,
        })
    }

    fn tangential_record(&self, alpha: f64) -> Result<ZeroRecord> {
        let eta = self.critical.eta_min;
        let m = compute_moments(eta, MIN_KMAX)?;
        let e = eval_b_with(&m, alpha);
        self.confirm_zero_residual(eta, alpha, e.b)?;
        let multiplicity = if e.b1.abs() > MULTIPLICITY_DERIV_TOL {
            1
        } else if e.b2.abs() > MULTIPLICITY_DERIV_TOL {
            2
        } else {
            3
        };
        Ok(ZeroRecord {
            eta,
            multiplicity,
            bracket: self.eta_min_bracket,
            side: Side::Negative,
        })
    }

    /// Locates the f-root on one monotone side of eta_min by bisection plus
    /// two guarded Newton polishing steps.
    fn nonzero_root(&self, alpha: f64, right_side: bool) -> Result<ZeroRecord> {
        let eta_min = self.critical.eta_min;
        let g = |eta: f64| -> Result<f64> {
            let m = compute_moments(eta, MIN_KMAX)?;
            Ok(eval_f_with(&m) - alpha)
        };
        // f(eta_min) = alpha* < alpha on both sides of the bracket interior
        let g_min = self.critical.alpha_star - alpha;
        let (lo, hi, g_lo) = if right_side {
            // f(eta) > 2 eta makes f - alpha positive at alpha/2 + 1
            let hi = alpha / 2.0 + 1.0;
            (eta_min, hi, g_min)
        } else {
            // f(eta) > -eta makes f - alpha positive at -(max(alpha, |eta_min|) + 1)
            let lo = -(alpha.max(eta_min.abs()) + 1.0);
            (lo, eta_min, g(lo)?)
        };
        let g_hi = if right_side { g(hi)? } else { g_min };
        if g_lo.signum() == g_hi.signum() {
            return Err(Error::Internal(format!(
                "root bracket [{lo}, {hi}] for alpha = {alpha} lost its sign change"
            )));
        }
        let (b_lo, b_hi) = bisect(g, lo, hi, g_lo)?;

        // guarded Newton polish on f(eta) - alpha
        let mut eta = 0.5 * (b_lo + b_hi);
        for _ in 0..2 {
            let m = compute_moments(eta, MIN_KMAX)?;
            let fp = crate::bcurve::eval_f_prime_with(&m);
            if fp == 0.0 {
                break;
            }
            let next = eta - (eval_f_with(&m) - alpha) / fp;
            if next.is_finite() && next >= b_lo && next <= b_hi {
                eta = next;
            } else {
                break;
            }
        }

        let m = compute_moments(eta, MIN_KMAX)?;
        let e = eval_b_with(&m, alpha);
        self.confirm_zero_residual(eta, alpha, e.b)?;
        let multiplicity = if e.b1.abs() > MULTIPLICITY_DERIV_TOL { 1 } else { 2 };
        Ok(ZeroRecord {
            eta,
            multiplicity,
            bracket: (b_lo, b_hi),
            side: if eta < 0.0 { Side::Negative } else { Side::Positive },
        })
    }

    fn confirm_zero_residual(&self, eta: f64, alpha: f64, b: f64) -> Result<()> {
        let tol = ZERO_B_TOL * (1.0 + eta * eta);
        if b.abs() > tol {
            return Err(Error::Internal(format!(
                "zero residual contract violated at eta = {eta}, alpha = {alpha}: \
                 |B| = {:e} > {tol:e}",
                b.abs()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    // reference constants keep their full mpmath digits
    #![allow(clippy::excessive_precision)]
    use super::*;
    use crate::bcurve::{b1_factorized, eta_bar, eval_b, eval_f, zero_relation_residual};
    use approx::assert_relative_eq;
    use std::sync::OnceLock;

    // mpmath references (30 significant digits).
    const ETA_MIN_REF: f64 = -2.178287974844518190083615;
    const ALPHA_STAR_REF: f64 = 6.731486396483356510410506;
    const F_SECOND_REF: f64 = 0.30324510590879113733;
    const ETA1_AT_10: f64 = -7.9013716051846750835;
    const ETA2_AT_10: f64 = 2.3542914133839262948;
    const ETA1_AT_7_5: f64 = -4.6110092674687512658;
    const R2_AT_ETA2_10: f64 = 0.17638057244107158035;

    fn classifier() -> &'static Classifier {
        static C: OnceLock<Classifier> = OnceLock::new();
        C.get_or_init(|| Classifier::new().unwrap())
    }

    #[test]
    fn f_prime_numerator_at_zero_is_4_over_315() {
        let m = compute_moments(0.0, MIN_KMAX).unwrap();
        assert_relative_eq!(f_prime_numerator(&m), 4.0 / 315.0, max_relative = 1e-13);
    }

    #[test]
    fn critical_data_matches_references() {
        let cd = classifier().critical();
        assert!(cd.eta_min < 0.0);
        assert_relative_eq!(cd.eta_min, ETA_MIN_REF, max_relative = 1e-11);
        assert!(cd.alpha_star > 20.0 / 3.0 && cd.alpha_star < 7.5);
        assert_relative_eq!(cd.alpha_star, ALPHA_STAR_REF, max_relative = 1e-12);
        assert_relative_eq!(cd.f_second_at_min, F_SECOND_REF, max_relative = 1e-5);
        // f' changes sign across the minimizer
        assert!(eval_f_prime(cd.eta_min - 1.0).unwrap() < 0.0);
        assert!(eval_f_prime(cd.eta_min + 1.0).unwrap() > 0.0);
        // free functions agree
        assert_relative_eq!(
            find_eta_min().unwrap(),
            cd.eta_min,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            critical_alpha().unwrap().alpha_star,
            cd.alpha_star,
            max_relative = 1e-14
        );
    }

    #[test]
    fn golden_oracle_agrees_with_bisection_path() {
        let cd = classifier().critical();
        let (eta_g, f_g) = oracle::golden_min_f(-100.0, 0.0).unwrap();
        assert!(eta_g < 0.0);
        assert!((f_g - cd.alpha_star).abs() <= 1e-9);
    }

    #[test]
    fn f_prime_vanishes_at_eta_min() {
        let cd = classifier().critical();
        assert!(eval_f_prime(cd.eta_min).unwrap().abs() <= 1e-8);
    }

    #[test]
    fn tangential_zero_second_derivative_identity() {
        // At alpha = alpha* the tangential zero sits at eta_bar_1(alpha*),
        // where both preconditions of the quadratic-root formula hold, so
        // the checked variant must accept and match the generic closed form.
        let cd = *classifier().critical();
        let bars = eta_bar(cd.alpha_star).unwrap();
        let via_root = crate::bcurve::b2_at_quadratic_root_checked(bars.eta_bar_1, cd.alpha_star)
            .expect("both preconditions hold at the tangential zero");
        let generic = eval_b(bars.eta_bar_1, cd.alpha_star).unwrap().b2;
        assert!((via_root - generic).abs() < 1e-6, "{via_root} vs {generic}");
        assert!(via_root < 0.0);
    }

    #[test]
    fn case_i_at_alpha_10() {
        let zs = classifier().classify(10.0).unwrap();
        assert_eq!(zs.case_label, CaseLabel::I);
        assert_eq!(zs.zeros.len(), 3);
        let (z1, z0, z2) = (&zs.zeros[0], &zs.zeros[1], &zs.zeros[2]);
        assert_relative_eq!(z1.eta, ETA1_AT_10, max_relative = 1e-10);
        assert_eq!(z0.eta, 0.0);
        assert_eq!(z0.multiplicity, 2);
        assert_relative_eq!(z2.eta, ETA2_AT_10, max_relative = 1e-10);
        assert_eq!((z1.multiplicity, z2.multiplicity), (1, 1));
        assert_eq!((z1.side, z0.side, z2.side), (Side::Negative, Side::Origin, Side::Positive));
        // strict ordering against the quadratic roots
        let bars = eta_bar(10.0).unwrap();
        assert!(z1.eta < bars.eta_bar_1 && bars.eta_bar_1 < -5.0);
        assert!(z2.eta > bars.eta_bar_2 && bars.eta_bar_2 > 0.0);
        // brackets contain the zeros
        assert!(z1.bracket.0 <= z1.eta && z1.eta <= z1.bracket.1);
        assert!(z2.bracket.0 <= z2.eta && z2.eta <= z2.bracket.1);
    }

    #[test]
    fn case_ii_at_alpha_7_5() {
        let zs = classifier().classify(7.5).unwrap();
        assert_eq!(zs.case_label, CaseLabel::II);
        assert_eq!(zs.zeros.len(), 2);
        assert_relative_eq!(zs.zeros[0].eta, ETA1_AT_7_5, max_relative = 1e-10);
        assert!(zs.zeros[0].eta < -3.75);
        assert_eq!(zs.zeros[1].multiplicity, 3);
    }

    #[test]
    fn case_iii_between_critical_and_7_5() {
        for alpha in [7.0, 7.4] {
            let zs = classifier().classify(alpha).unwrap();
            assert_eq!(zs.case_label, CaseLabel::III, "alpha={alpha}");
            assert_eq!(zs.zeros.len(), 3);
            assert!(zs.zeros[0].eta < zs.zeros[1].eta && zs.zeros[1].eta < 0.0);
            assert_eq!(zs.zeros[2].side, Side::Origin);
        }
    }

    #[test]
    fn case_iv_at_critical_alpha() {
        let cd = *classifier().critical();
        let zs = classifier().classify(cd.alpha_star).unwrap();
        assert_eq!(zs.case_label, CaseLabel::IV);
        assert_eq!(zs.zeros.len(), 2);
        assert_eq!(zs.zeros[0].multiplicity, 2);
        assert_relative_eq!(zs.zeros[0].eta, cd.eta_min, max_relative = 1e-13);
        // the tangential zero sits on the quadratic root eta_bar_1(alpha*)
        let bars = eta_bar(cd.alpha_star).unwrap();
        assert!((zs.zeros[0].eta - bars.eta_bar_1).abs() < 1e-7);
    }

    #[test]
    fn case_v_below_critical() {
        for alpha in [2.0, 5.0, 20.0 / 3.0] {
            let zs = classifier().classify(alpha).unwrap();
            assert_eq!(zs.case_label, CaseLabel::V, "alpha={alpha}");
            assert_eq!(zs.zeros.len(), 1);
            assert_eq!(zs.zeros[0].side, Side::Origin);
            assert_eq!(zs.zeros[0].multiplicity, 2);
        }
    }

    #[test]
    fn transition_across_critical_alpha() {
        let cd = *classifier().critical();
        assert_eq!(classifier().classify(cd.alpha_star - 1e-3).unwrap().zeros.len(), 1);
        let above = classifier().classify(cd.alpha_star + 1e-3).unwrap();
        assert_eq!(above.zeros.len(), 3);
        assert_eq!(above.case_label, CaseLabel::III);
    }

    #[test]
    fn zeros_satisfy_both_formulations_and_identities() {
        for alpha in [7.4, 8.0, 10.0, 50.0] {
            let zs = classifier().classify(alpha).unwrap();
            for z in zs.zeros.iter().filter(|z| z.side != Side::Origin) {
                let b = eval_b(z.eta, alpha).unwrap();
                assert!(b.b.abs() <= ZERO_B_TOL * (1.0 + z.eta * z.eta));
                assert!((eval_f(z.eta).unwrap() - alpha).abs() <= 1e-9 * alpha);
                // zero relation (3.38)
                assert!(zero_relation_residual(z.eta, alpha).unwrap() < 1e-10);
                // factorized derivative agrees with the closed form
                assert!((b1_factorized(z.eta, alpha) - b.b1).abs() < 1e-8);
            }
        }
        // frozen spot check of the zero relation at eta2*(10)
        let m = compute_moments(ETA2_AT_10, MIN_KMAX).unwrap();
        assert_relative_eq!(m.ratio(2), R2_AT_ETA2_10, max_relative = 1e-12);
    }

    #[test]
    fn b1_sign_forced_by_factorization_in_case_i() {
        for alpha in [8.0, 10.0, 50.0] {
            let zs = classifier().classify(alpha).unwrap();
            let bars = eta_bar(alpha).unwrap();
            let z1 = &zs.zeros[0];
            let z2 = &zs.zeros[2];
            // eta1* < eta_bar_1 < 0: both quadratic factors positive, -8eta*/3a² > 0
            let b1_at_z1 = eval_b(z1.eta, alpha).unwrap().b1;
            assert!(z1.eta < bars.eta_bar_1);
            assert!(b1_at_z1 > 0.0, "alpha={alpha}");
            // eta2* > eta_bar_2 > 0: product of factors positive, prefactor < 0
            let b1_at_z2 = eval_b(z2.eta, alpha).unwrap().b1;
            assert!(z2.eta > bars.eta_bar_2);
            assert!(b1_at_z2 < 0.0, "alpha={alpha}");
        }
    }

    #[test]
    fn scan_oracle_agrees_with_classifier() {
        for alpha in [2.0, 7.0, 10.0] {
            assert!(classifier().zero_count_oracle_check(alpha).unwrap(), "alpha={alpha}");
        }
        assert!(matches!(
            classifier().zero_count_oracle_check(7.5),
            Err(Error::ScanInconclusive { .. })
        ));
    }

    #[test]
    fn sweep_below_critical_is_isotropic_only() {
        let table = classifier().sweep(1.0, 6.0, 11).unwrap();
        assert_eq!(table.rows.len(), 11);
        for row in &table.rows {
            assert_eq!(row.branch, Branch::Iso);
            assert_eq!(row.eta, 0.0);
            assert_eq!(row.order_parameter, 0.0);
            assert!(!row.order_parameter.is_sign_negative(), "S must not be -0");
        }
    }

    #[test]
    fn sweep_case_i_grid() {
        let table = classifier().sweep(8.0, 12.0, 5).unwrap();
        assert_eq!(table.rows.len(), 15);
        // sorted by (alpha, branch name)
        for pair in table.rows.windows(2) {
            let key = |r: &BranchRow| (r.alpha, r.branch.to_string());
            assert!(key(&pair[0]) <= key(&pair[1]));
        }
        for row in &table.rows {
            assert_relative_eq!(
                row.order_parameter,
                -row.eta / row.alpha,
                epsilon = 1e-15
            );
            match row.branch {
                Branch::Iso => assert_eq!(row.order_parameter, 0.0),
                Branch::OuterNegative => assert!(row.order_parameter > 0.0),
                Branch::Inner => assert!(row.order_parameter < 0.0),
            }
        }
    }

    #[test]
    fn sweep_branch_monotonicity_in_case_iii() {
        let cd = *classifier().critical();
        let table = classifier()
            .sweep(cd.alpha_star + 1e-3, 7.5 - 1e-3, 12)
            .unwrap();
        let outer: Vec<f64> = table
            .rows
            .iter()
            .filter(|r| r.branch == Branch::OuterNegative)
            .map(|r| r.eta)
            .collect();
        let inner: Vec<f64> = table
            .rows
            .iter()
            .filter(|r| r.branch == Branch::Inner)
            .map(|r| r.eta)
            .collect();
        assert_eq!(outer.len(), 12);
        assert_eq!(inner.len(), 12);
        for w in outer.windows(2) {
            assert!(w[1] < w[0], "outer branch must decrease");
        }
        for w in inner.windows(2) {
            assert!(w[1] > w[0], "inner branch must increase");
        }
        for r in &table.rows {
            if r.branch != Branch::Iso {
                assert!(r.eta < 0.0);
            }
        }
    }

    #[test]
    fn growth_cutoffs_bracket_every_zero() {
        for alpha in [0.5, 2.0, 20.0 / 3.0, 7.5, 10.0, 50.0] {
            assert!(eval_b(-alpha - 1.0, alpha).unwrap().b < 0.0);
            assert!(eval_b(alpha / 2.0 + 1.0, alpha).unwrap().b < 0.0);
        }
    }

    #[test]
    fn argument_errors() {
        assert!(matches!(classifier().classify(0.0), Err(Error::BadAlpha { .. })));
        assert!(matches!(classifier().classify(-1.0), Err(Error::BadAlpha { .. })));
        assert!(classifier().sweep(5.0, 4.0, 10).is_err());
        assert!(classifier().sweep(0.0, 4.0, 10).is_err());
        assert!(classifier().sweep(1.0, 4.0, 1).is_err());
    }
}
