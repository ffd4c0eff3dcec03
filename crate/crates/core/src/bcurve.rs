//! The bifurcation function
//!
//! B(eta, alpha) = 3 e^{-eta} / ∫₀¹ e^{-eta z²} dz - (3 - 2 eta + 4 eta²/alpha)
//!
//! with its first three eta-derivatives in closed form, the factorized
//! derivative valid at zeros of B, the quadratic roots delimiting where
//! zeros can live, and the equivalent formulation f(eta) = A₀/(A₂ - A₄)
//! whose level sets f = alpha carry exactly the nonzero zeros of B.
//!
//! All formulas are written in terms of q = e^{-eta}/A₀ and the ratios
//! r_k = A_k/A₀, which stay finite over the whole range of eta.

use crate::error::{require_alpha, Error, Result};
use crate::moments::{compute_moments, MomentSet, MIN_KMAX};

/// Loose zero tolerance used by checked zero-only formulas:
/// |B| ≤ 1e-8 (1 + eta*²).
pub const ZERO_LOOSE_TOL: f64 = 1e-8;

/// Acceptance tolerance for "is a root of the derivative quadratic".
const QUAD_ROOT_TOL: f64 = 1e-8;

/// B and its first three eta-derivatives at one (eta, alpha).
#[derive(Debug, Clone, Copy)]
pub struct BEval {
    pub eta: f64,
    pub alpha: f64,
    /// B(eta, alpha)
    pub b: f64,
    /// ∂B/∂eta
    pub b1: f64,
    /// ∂²B/∂eta²
    pub b2: f64,
    /// ∂³B/∂eta³
    pub b3: f64,
}

/// The two real roots eta_bar_1 ≤ eta_bar_2 of the quadratic factor
/// eta² + eta alpha/2 + (alpha/2)(15/2 - alpha) appearing in the
/// factorization of B_eta at zeros. Real precisely for alpha ≥ 20/3.
#[derive(Debug, Clone, Copy)]
pub struct EtaBarPair {
    pub alpha: f64,
    pub eta_bar_1: f64,
    pub eta_bar_2: f64,
}

/// Evaluates B and its first three eta-derivatives from the closed forms:
///
/// * b  = 3q - (3 - 2 eta + 4 eta²/alpha)
/// * b1 = 3q (r₂ - 1) + 2 - 8 eta/alpha
/// * b2 = 3q (1 - 2 r₂ - r₄ + 2 r₂²) - 8/alpha
/// * b3 = 3q (6 r₂³ - 6 r₂ (r₂ + r₄) + (3 r₂ + 3 r₄ + r₆) - 1)
pub fn eval_b(eta: f64, alpha: f64) -> Result<BEval> {
    require_alpha(alpha)?;
    let m = compute_moments(eta, MIN_KMAX)?;
    Ok(eval_b_with(&m, alpha))
}

/// Same as [`eval_b`] but reusing an existing moment set (hot loops).
/// `alpha` is assumed validated and `m.kmax() >= 6`.
pub fn eval_b_with(m: &MomentSet, alpha: f64) -> BEval {
    let eta = m.eta();
    let q = m.q();
    let (r2, r4, r6) = (m.ratio(2), m.ratio(4), m.ratio(6));
    BEval {
        eta,
        alpha,
        b: 3.0 * q - (3.0 - 2.0 * eta + 4.0 * eta * eta / alpha),
        b1: 3.0 * q * (r2 - 1.0) + 2.0 - 8.0 * eta / alpha,
        b2: 3.0 * q * (1.0 - 2.0 * r2 - r4 + 2.0 * r2 * r2) - 8.0 / alpha,
        b3: 3.0 * q * (6.0 * r2 * r2 * r2 - 6.0 * r2 * (r2 + r4) + (3.0 * r2 + 3.0 * r4 + r6) - 1.0),
    }
}

/// The derivative quadratic A(eta) = eta² + eta alpha/2 + (alpha/2)(15/2 - alpha).
fn derivative_quadratic(eta: f64, alpha: f64) -> f64 {
    eta * eta + 0.5 * eta * alpha + 0.5 * alpha * (7.5 - alpha)
}

/// Factorized first derivative at a zero eta* of B:
///
/// B_eta(eta*, alpha) = -(8 eta*/(3 alpha²)) (eta*² + eta* alpha/2 + (alpha/2)(15/2 - alpha))
///
/// This is the pure formula; it is only equal to the actual derivative when
/// eta* is a zero of B. See [`b1_factorized_checked`] for the guarded form.
pub fn b1_factorized(eta_star: f64, alpha: f64) -> f64 {
    -(8.0 * eta_star / (3.0 * alpha * alpha)) * derivative_quadratic(eta_star, alpha)
}

/// [`b1_factorized`] with the zero precondition enforced: errors with the
/// measured |B| unless |B(eta*, alpha)| ≤ 1e-8 (1 + eta*²). Under that
/// precondition the result agrees with `eval_b(..).b1` to 1e-8 absolute.
pub fn b1_factorized_checked(eta_star: f64, alpha: f64) -> Result<f64> {
    let b = eval_b(eta_star, alpha)?.b;
    let tol = ZERO_LOOSE_TOL * (1.0 + eta_star * eta_star);
    if b.abs() > tol {
        return Err(Error::NotAZero {
            eta: eta_star,
            alpha,
            b_abs: b.abs(),
            tol,
        });
    }
    Ok(b1_factorized(eta_star, alpha))
}

/// Second derivative of B at a zero that is also a root of the derivative
/// quadratic: B_etaeta = (4/(3 alpha)) (eta* + 15 - 2 alpha).
///
/// Enforced at runtime: alpha must exceed 20/3 (the quadratic has no real
/// roots otherwise) and eta* must actually be a root of the quadratic. The
/// remaining precondition, B(eta*, alpha) = 0, stays with the caller: the
/// formula evaluates anywhere on the root locus, but only means B_etaeta
/// where B vanishes (see [`b2_at_quadratic_root_checked`]).
pub fn b2_at_quadratic_root(eta_star: f64, alpha: f64) -> Result<f64> {
    require_alpha(alpha)?;
    if alpha <= 20.0 / 3.0 {
        return Err(Error::NoRealRoots { alpha });
    }
    let quad = derivative_quadratic(eta_star, alpha);
    let scale =
        eta_star * eta_star + 0.5 * alpha * eta_star.abs() + 0.5 * alpha * (7.5 - alpha).abs() + 1.0;
    if quad.abs() > QUAD_ROOT_TOL * scale {
        return Err(Error::NotQuadraticRoot {
            eta: eta_star,
            alpha,
            quad_abs: quad.abs(),
        });
    }
    Ok(4.0 / (3.0 * alpha) * (eta_star + 15.0 - 2.0 * alpha))
}

/// [`b2_at_quadratic_root`] with the B(eta*, alpha) = 0 precondition also
/// enforced, at the loose tolerance of [`b1_factorized_checked`].
pub fn b2_at_quadratic_root_checked(eta_star: f64, alpha: f64) -> Result<f64> {
    let b = eval_b(eta_star, alpha)?.b;
    let tol = ZERO_LOOSE_TOL * (1.0 + eta_star * eta_star);
    if b.abs() > tol {
        return Err(Error::NotAZero {
            eta: eta_star,
            alpha,
            b_abs: b.abs(),
            tol,
        });
    }
    b2_at_quadratic_root(eta_star, alpha)
}

/// The roots eta_bar_1 ≤ eta_bar_2 of the derivative quadratic:
///
/// eta_bar_{1,2} = -(alpha/4)(1 ± 3 sqrt(1 - 20/(3 alpha)))
///
/// Errors with `NoRealRoots` for alpha below 20/3; at alpha = 20/3 the
/// roots coincide at -alpha/4.
pub fn eta_bar(alpha: f64) -> Result<EtaBarPair> {
    require_alpha(alpha)?;
    let disc = 1.0 - 20.0 / (3.0 * alpha);
    if disc < 0.0 {
        return Err(Error::NoRealRoots { alpha });
    }
    let s = disc.sqrt();
    Ok(EtaBarPair {
        alpha,
        eta_bar_1: -(alpha / 4.0) * (1.0 + 3.0 * s),
        eta_bar_2: -(alpha / 4.0) * (1.0 - 3.0 * s),
    })
}

/// f(eta) = A₀/(A₂ - A₄) = 1/(r₂ - r₄). Always positive and finite:
/// r₂ > r₄ strictly for finite eta.
pub fn eval_f(eta: f64) -> Result<f64> {
    let m = compute_moments(eta, MIN_KMAX)?;
    Ok(eval_f_with(&m))
}

/// f from an existing moment set.
pub fn eval_f_with(m: &MomentSet) -> f64 {
    1.0 / (m.ratio(2) - m.ratio(4))
}

/// f'(eta) = (-A₂(A₂-A₄) + A₀(A₄-A₆)) / (A₂-A₄)², in the ratio form
/// ((r₄-r₆) - r₂(r₂-r₄)) / (r₂-r₄)².
pub fn eval_f_prime(eta: f64) -> Result<f64> {
    let m = compute_moments(eta, MIN_KMAX)?;
    Ok(eval_f_prime_with(&m))
}

/// f' from an existing moment set.
pub fn eval_f_prime_with(m: &MomentSet) -> f64 {
    let d = m.ratio(2) - m.ratio(4);
    (f_prime_numerator(m) / d) / d
}

/// Numerator of f' in ratio form: (r₄ - r₆) - r₂ (r₂ - r₄). Shares its sign
/// with f' and with e^{eta}(A₀(A₄-A₆) - A₂(A₂-A₄)), the strictly increasing
/// combination behind the uniqueness of the f-minimizer.
pub fn f_prime_numerator(m: &MomentSet) -> f64 {
    let (r2, r4, r6) = (m.ratio(2), m.ratio(4), m.ratio(6));
    (r4 - r6) - r2 * (r2 - r4)
}

/// Residual of the zero relation A₂ = ((alpha - 2 eta)/(3 alpha)) A₀,
/// i.e. |r₂(eta*) - (alpha - 2 eta*)/(3 alpha)|. At genuine zeros of B this
/// is ≤ 1e-10.
pub fn zero_relation_residual(eta_star: f64, alpha: f64) -> Result<f64> {
    require_alpha(alpha)?;
    let m = compute_moments(eta_star, MIN_KMAX)?;
    Ok((m.ratio(2) - (alpha - 2.0 * eta_star) / (3.0 * alpha)).abs())
}
