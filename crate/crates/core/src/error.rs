//! Error types shared across the crate.

/// Errors raised by moment evaluation, the closed-form curve functions,
/// the zero classifier, and the oracles.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// The concentration parameter must be a finite real number.
    #[error("eta must be finite, got {eta}")]
    NonFiniteEta { eta: f64 },

    /// Moment sets need an even truncation order of at least 6.
    #[error("kmax must be an even integer >= 6, got {kmax}")]
    BadKmax { kmax: usize },

    /// The intensity parameter must be positive and finite.
    #[error("alpha must be positive and finite, got {alpha}")]
    BadAlpha { alpha: f64 },

    /// A finite-difference step must be positive and finite.
    #[error("finite-difference step must be positive and finite, got {h}")]
    BadStep { h: f64 },

    /// Generic argument validation failure (ranges, counts).
    #[error("invalid argument: {0}")]
    BadArgument(String),

    /// The quadratic factor of the derivative factorization has no real
    /// roots for alpha below 20/3.
    #[error("no real quadratic roots: alpha = {alpha} is not above 20/3")]
    NoRealRoots { alpha: f64 },

    /// A point handed to a zero-only formula is not a zero of B within the
    /// loose tolerance; carries the measured |B|.
    #[error("not a zero of B: |B({eta}, {alpha})| = {b_abs:e} exceeds {tol:e}")]
    NotAZero {
        eta: f64,
        alpha: f64,
        b_abs: f64,
        tol: f64,
    },

    /// A point handed to the quadratic-root derivative formula is not a
    /// root of the quadratic factor.
    #[error("eta = {eta} is not a root of the derivative quadratic for alpha = {alpha} (|A| = {quad_abs:e})")]
    NotQuadraticRoot {
        eta: f64,
        alpha: f64,
        quad_abs: f64,
    },

    /// The sign-scan count is not certifiable close to the boundary
    /// intensities (tangential zeros produce no sign change).
    #[error("sign scan inconclusive: alpha = {alpha} is within 1e-6 of a boundary intensity")]
    ScanInconclusive { alpha: f64 },

    /// The trapezoid oracle is only trusted on the stated range.
    #[error("oracle range exceeded: |eta| = {eta} is outside the trusted range {limit}")]
    OracleRange { eta: f64, limit: f64 },

    /// The refining oracle quadrature did not converge.
    #[error("oracle quadrature failed to converge after {levels} refinement levels")]
    OracleNonConvergence { levels: usize },

    /// An internal consistency check failed; indicates a bug, not a domain
    /// condition.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Validates an intensity argument.
pub(crate) fn require_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::BadAlpha { alpha })
    }
}
