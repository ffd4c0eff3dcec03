//! Evaluation and classification machinery for the bifurcation function of
//! the Doi-Onsager equation on the sphere with Maier-Saupe interaction.
//!
//! The equilibria of the kinetic model reduce to the zeros of a scalar
//! function B(eta, alpha) of the concentration parameter eta and the
//! interaction intensity alpha. This crate provides:
//!
//! * [`moments`] — overflow-safe evaluation of the moment integrals
//!   A_k(eta) = ∫₀¹ z^k e^{-eta z²} dz and their ratios over the whole
//!   parameter range;
//! * [`bcurve`] — B, its first three eta-derivatives in closed form, the
//!   factorized derivative at zeros, and the equivalent formulation
//!   f(eta) = A₀/(A₂-A₄) whose level sets carry the nonzero zeros;
//! * [`classify`] — the zero classifier over the five intensity regimes,
//!   the critical intensities 7.5 and alpha* = f(eta_min), and bifurcation
//!   sweep tables;
//! * [`oracle`] — slow, structurally independent reference implementations
//!   (trapezoid/Richardson quadrature, sign scans, golden-section search,
//!   a 2-D positivity integral) used for cross-checks;
//! * [`verify`] — the named battery running every identity and invariant
//!   against its oracle.
//!
//! All operations are pure functions of their arguments (no global mutable
//! state), so everything here is safe to call concurrently.

pub mod bcurve;
pub mod classify;
pub mod error;
pub mod gauss;
pub mod moments;
pub mod oracle;
#[cfg(feature = "special")]
pub mod special;
pub mod verify;

pub use bcurve::{
    b1_factorized, b1_factorized_checked, b2_at_quadratic_root, b2_at_quadratic_root_checked,
    eta_bar, eval_b, eval_f, eval_f_prime, zero_relation_residual, BEval, EtaBarPair,
};
pub use classify::{
    critical_alpha, find_eta_min, Branch, BranchRow, BranchTable, CaseLabel, Classifier,
    CriticalData, Side, ZeroRecord, ZeroSet,
};
pub use error::{Error, Result};
pub use moments::{compute_moments, moment_derivative_check, MomentSet};
pub use oracle::OracleReport;
