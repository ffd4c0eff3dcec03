//! Special-function route to A₀, behind the `special` feature.
//!
//! A₀(eta) = (1/2) sqrt(pi/eta) erf(sqrt(eta)) for eta > 0, and the scaled
//! s₀ = e^{eta} A₀(eta) = F(sqrt(-eta)) / sqrt(-eta) for eta < 0, where F is
//! the Dawson function. Both are computed here by marching Taylor
//! expansions of their defining ODEs (y'' = -2x y' for erf, F' = 1 - 2xF
//! for Dawson), a route with nothing in common with the quadrature paths,
//! which makes it a genuine cross-check. Not used by any default code path.

const STEP: f64 = 0.25;
const TERM_TOL: f64 = 1e-19;
const MAX_ORDER: usize = 48;

/// erf(x) to ~1e-14. Saturates to ±1 beyond |x| = 6 (the complement is
/// below one ulp of 1 there).
pub fn erf(x: f64) -> f64 {
    if x < 0.0 {
        return -erf(-x);
    }
    if x > 6.0 {
        return 1.0;
    }
    // march y with y(0) = 0, y'(0) = 2/sqrt(pi); y^{(n+2)} = -2x y^{(n+1)} - 2n y^{(n)}
    let mut a = 0.0f64;
    let mut y = 0.0f64;
    let mut yp = 2.0 / std::f64::consts::PI.sqrt();
    while a < x {
        let h = STEP.min(x - a);
        let (ny, nyp) = taylor_step_erf(a, y, yp, h);
        y = ny;
        yp = nyp;
        a += h;
    }
    y
}

/// Taylor coefficients t_m = y^{(m)}(a)/m! from the ODE y'' = -2x y',
/// i.e. t_{m+2} = -2 (a t_{m+1} + t_m m/(m+1)) / (m+2).
fn taylor_step_erf(a: f64, y: f64, yp: f64, h: f64) -> (f64, f64) {
    let mut t = [0.0f64; MAX_ORDER + 2];
    t[0] = y;
    t[1] = yp;
    for m in 0..MAX_ORDER {
        t[m + 2] = -2.0 * (a * t[m + 1] + t[m] * (m as f64) / (m as f64 + 1.0)) / (m as f64 + 2.0);
    }
    horner_value_and_slope(&t, h, y.abs().max(yp.abs()))
}

/// Dawson function F(x) = e^{-x²} ∫₀ˣ e^{t²} dt to ~1e-14.
pub fn dawson(x: f64) -> f64 {
    if x < 0.0 {
        return -dawson(-x);
    }
    if x > 8.0 {
        // asymptotic series F(x) ~ (1/2x) Σ (2m-1)!!/(2x²)^m
        let inv2x2 = 1.0 / (2.0 * x * x);
        let mut term = 1.0;
        let mut sum = 1.0;
        for m in 1..30 {
            term *= (2.0 * m as f64 - 1.0) * inv2x2;
            sum += term;
            if term < 1e-17 {
                break;
            }
        }
        return sum / (2.0 * x);
    }
    // march F' = 1 - 2xF from F(0) = 0
    let mut a = 0.0f64;
    let mut f = 0.0f64;
    while a < x {
        let h = STEP.min(x - a);
        f = taylor_step_dawson(a, f, h);
        a += h;
    }
    f
}

/// t_{n+1} = -2 (a t_n + t_{n-1}) / (n+1) for n >= 1, t_1 = 1 - 2a t_0.
fn taylor_step_dawson(a: f64, f: f64, h: f64) -> f64 {
    let mut t = [0.0f64; MAX_ORDER + 2];
    t[0] = f;
    t[1] = 1.0 - 2.0 * a * f;
    for n in 1..=MAX_ORDER {
        t[n + 1] = -2.0 * (a * t[n] + t[n - 1]) / (n as f64 + 1.0);
    }
    horner_value_and_slope(&t, h, f.abs().max(1.0)).0
}

/// Evaluates Σ t_m h^m and Σ m t_m h^{m-1}, truncating after two
/// consecutive negligible terms (single zero coefficients occur at a = 0,
/// where the expansions have pure parity).
fn horner_value_and_slope(t: &[f64], h: f64, scale: f64) -> (f64, f64) {
    let mut value = 0.0;
    let mut slope = 0.0;
    let mut hp = 1.0; // h^m
    let mut small_run = 0;
    for (m, &tm) in t.iter().enumerate() {
        let term = tm * hp;
        value += term;
        if m >= 1 {
            slope += (m as f64) * term / h;
        }
        hp *= h;
        if m > 4 {
            if term.abs() < TERM_TOL * scale.max(value.abs()) {
                small_run += 1;
                if small_run >= 2 {
                    break;
                }
            } else {
                small_run = 0;
            }
        }
    }
    (value, slope)
}

/// The scaled zeroth moment through the special-function route:
/// A₀ for eta ≥ 0, e^{eta} A₀ for eta < 0, matching
/// [`crate::moments::MomentSet::scaled`].
pub fn a0_scaled_special(eta: f64) -> f64 {
    if eta == 0.0 {
        1.0
    } else if eta > 0.0 {
        let s = eta.sqrt();
        0.5 * (std::f64::consts::PI / eta).sqrt() * erf(s)
    } else {
        let s = (-eta).sqrt();
        dawson(s) / s
    }
}

#[cfg(test)]
mod tests {
    // reference constants keep their full mpmath digits
    #![allow(clippy::excessive_precision)]
    use super::*;
    use crate::moments::compute_moments;
    use approx::assert_relative_eq;

    // mpmath anchors (30 significant digits).
    const ERF_ANCHORS: [(f64, f64); 5] = [
        (0.5, 0.52049987781304653768),
        (1.0, 0.84270079294971486934),
        (2.0, 0.99532226501895273416),
        (3.7, 0.99999983284894209085),
        (5.5, 0.99999999999999264215),
    ];
    const DAWSON_ANCHORS: [(f64, f64); 7] = [
        (0.3, 0.28263166502131192868),
        (0.92, 0.54103493280273150892),
        (2.5, 0.22308372216743548113),
        (5.0, 0.10213407442427683544),
        (8.0, 0.063000198707553387919),
        (20.0, 0.025031367926403671947),
        (100.0, 0.0050002500375093782827),
    ];

    #[test]
    fn erf_anchors() {
        for &(x, v) in &ERF_ANCHORS {
            assert_relative_eq!(erf(x), v, max_relative = 1e-13);
            assert_relative_eq!(erf(-x), -v, max_relative = 1e-13);
        }
        assert_eq!(erf(0.0), 0.0);
        assert_eq!(erf(7.0), 1.0);
    }

    #[test]
    fn dawson_anchors() {
        for &(x, v) in &DAWSON_ANCHORS {
            assert_relative_eq!(dawson(x), v, max_relative = 1e-13);
            assert_relative_eq!(dawson(-x), -v, max_relative = 1e-13);
        }
        assert_eq!(dawson(0.0), 0.0);
    }

    #[test]
    fn agrees_with_quadrature_moments() {
        for &eta in &[
            -1e4, -500.0, -30.0, -2.2, -0.4, -0.05, 0.05, 0.4, 2.2, 30.0, 500.0, 1e4,
        ] {
            let m = compute_moments(eta, 6).unwrap();
            assert_relative_eq!(
                a0_scaled_special(eta),
                m.scaled(0),
                max_relative = 1e-12
            );
        }
    }
}
