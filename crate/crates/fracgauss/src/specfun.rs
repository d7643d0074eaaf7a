//! Special functions shared by every other module: the gamma function (with a
//! log companion for large arguments), generalized binomial weights for the
//! backward-difference fractional derivative, and the Mittag-Leffler function
//! used as a test oracle.

use crate::error::{Error, Result};

pub use num_complex::Complex64 as ComplexScalar;

/// Lanczos approximation, g = 7 with 9 coefficients. Relative error stays
/// below 1e-13 over the range we promise (see tests).
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)] // digits as published
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Arguments above this overflow Γ in f64; callers wanting larger values use
/// `ln_gamma` instead.
const GAMMA_OVERFLOW: f64 = 171.624;

/// Tolerance used to decide whether a real argument "is" an integer, both for
/// pole detection and for order snapping elsewhere in the crate.
pub const INTEGER_TOL: f64 = 1e-12;

pub fn is_near_integer(x: f64) -> bool {
    (x - x.round()).abs() < INTEGER_TOL
}

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument (caller passes raw argument minus one).
    let mut sum = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    sum
}

/// Γ(x) for real x away from the poles at 0, -1, -2, ...
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("gamma of non-finite argument {x}")));
    }
    if x <= 0.5 && is_near_integer(x) && x.round() <= 0.0 {
        return Err(Error::GammaPole(x.round()));
    }
    if x < 0.5 {
        // Reflection: Γ(x) Γ(1-x) = π / sin(πx).
        let s = (std::f64::consts::PI * x).sin();
        return Ok(std::f64::consts::PI / (s * gamma(1.0 - x)?));
    }
    if x > GAMMA_OVERFLOW {
        return Err(Error::Overflow(format!(
            "gamma({x}) exceeds the floating range; use ln_gamma"
        )));
    }
    let z = x - 1.0;
    let base = z + LANCZOS_G + 0.5;
    let value =
        (2.0 * std::f64::consts::PI).sqrt() * base.powf(z + 0.5) * (-base).exp() * lanczos_sum(z);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(format!("gamma({x}) is not finite")))
    }
}

/// ln Γ(x) for x > 0; avoids the overflow that plain `gamma` hits past ~171.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "ln_gamma requires a positive argument, got {x}"
        )));
    }
    if x < 0.5 {
        // ln Γ(x) = ln π - ln sin(πx) - ln Γ(1-x), valid while Γ(x) > 0.
        let s = (std::f64::consts::PI * x).sin();
        return Ok(std::f64::consts::PI.ln() - s.ln() - ln_gamma(1.0 - x)?);
    }
    let z = x - 1.0;
    let base = z + LANCZOS_G + 0.5;
    Ok(
        0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * base.ln() - base
            + lanczos_sum(z).ln(),
    )
}

/// 1/Γ(x), extended by continuity to 0 at the poles. Unlike `gamma` this is
/// total for finite x: poles map to 0 and large arguments underflow cleanly.
pub fn recip_gamma(x: f64) -> f64 {
    if is_near_integer(x) && x.round() <= 0.0 {
        return 0.0;
    }
    if x > GAMMA_OVERFLOW {
        return match ln_gamma(x) {
            Ok(lg) => (-lg).exp(),
            Err(_) => 0.0,
        };
    }
    match gamma(x) {
        Ok(g) => 1.0 / g,
        Err(_) => 0.0,
    }
}

/// Backward-difference weights w_j = (-1)^j C(alpha, j), j = 0..count-1,
/// generated by the stable ratio recurrence (no factorials are formed).
pub fn gl_weights(alpha: f64, count: usize) -> Result<Vec<f64>> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "weight order alpha must be positive, got {alpha}"
        )));
    }
    if count < 1 {
        return Err(Error::InvalidArgument("weight count must be >= 1".into()));
    }
    let mut w = Vec::with_capacity(count);
    w.push(1.0);
    for j in 1..count {
        let prev = w[j - 1];
        w.push(prev * ((j as f64 - 1.0 - alpha) / j as f64));
    }
    Ok(w)
}

/// Two-parameter Mittag-Leffler E_{α,β}(z) by direct series summation.
/// Only intended as an oracle on the series-safe region |z| <= 50; the
/// truncation rule stops once a term drops below 1e-16 of the partial sum.
pub fn mittag_leffler(alpha: f64, beta: f64, z: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "mittag_leffler requires alpha > 0, got {alpha}"
        )));
    }
    if z.abs() > 50.0 {
        return Err(Error::Domain(format!(
            "mittag_leffler argument |z| = {} outside the series-safe region |z| <= 50",
            z.abs()
        )));
    }
    let mut sum = 0.0;
    let mut zp = 1.0; // z^k
    for k in 0..500 {
        let term = zp * recip_gamma(alpha * k as f64 + beta);
        sum += term;
        if !sum.is_finite() {
            return Err(Error::Overflow(format!(
                "mittag_leffler({alpha}, {beta}, {z}) overflows"
            )));
        }
        if k > 0 && term.abs() <= 1e-16 * sum.abs() {
            break;
        }
        zp *= z;
        if !zp.is_finite() {
            return Err(Error::Overflow(format!(
                "mittag_leffler({alpha}, {beta}, {z}): series power overflows before convergence"
            )));
        }
    }
    Ok(sum)
}
