//! Numerical inversion of Laplace transforms.
//!
//! A transform is an expression in `s` plus an optional list of power
//! corrections: the function actually inverted is
//!
//! ```text
//! F_total(s) = eval(expression, s) - sum_i coeff_i * s^power_i
//! ```
//!
//! with the corrections subtracted pointwise at every contour sample. Three
//! inverters are provided. Stehfest samples the transform on the positive
//! real axis and is spectrally accurate for smooth originals but useless for
//! oscillatory ones. The other two evaluate the Bromwich integral in its
//! cosine form
//!
//! ```text
//! f(t) ~= (2 e^{ct} / (pi t)) * sum_k W_k(x_k) Re[F_total(c + i x_k / t)] cos(x_k)
//! ```
//!
//! on the contour c = c0 + 1, where W_k comes from a Gauss rule on (0, inf):
//! plain Laguerre ("gli", W_k = w_k e^{x_k}) or the generalized weight
//! u^gamma e^{-u} ("mgi", W_k = w_k e^{x_k} x_k^{-gamma}), which absorbs an
//! algebraic endpoint factor and pays off when F has a known power behaviour.
//! Products w_k e^{x_k} are formed as exp(ln w_k + x_k) so large orders do
//! not overflow.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::{self, Ast};
use crate::quadrature::{self, RuleKind};
use crate::specfun;

#[derive(Debug, Clone, PartialEq)]
pub struct TransformSpec {
    /// Expression in the variable `s`.
    pub expression: String,
    /// (coefficient, power) pairs; each subtracts coeff * s^power.
    pub corrections: Vec<(f64, f64)>,
    /// Abscissa of convergence: F_total must be analytic for Re s > c0.
    pub c0: f64,
}

impl TransformSpec {
    pub fn new(expression: impl Into<String>, c0: f64) -> Self {
        TransformSpec {
            expression: expression.into(),
            corrections: Vec::new(),
            c0,
        }
    }

    fn compile(&self) -> Result<Ast> {
        expr::parse(&self.expression, "s")
    }
}

fn eval_total_real(ast: &Ast, corrections: &[(f64, f64)], s: f64) -> Result<f64> {
    let mut v = expr::eval_real(ast, s)?;
    for &(c, p) in corrections {
        v -= c * s.powf(p);
    }
    if !v.is_finite() {
        return Err(Error::NonFinite(format!(
            "transform value at s = {s} is not finite"
        )));
    }
    Ok(v)
}

fn eval_total_complex(ast: &Ast, corrections: &[(f64, f64)], s: Complex64) -> Result<Complex64> {
    let mut v = expr::eval_complex(ast, s)?;
    for &(c, p) in corrections {
        v -= s.powf(p) * c;
    }
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::NonFinite(format!(
            "transform value at s = {s} is not finite"
        )));
    }
    Ok(v)
}

/// F_total at a complex point (principal branch for the correction powers).
pub fn transform_value(spec: &TransformSpec, s: Complex64) -> Result<Complex64> {
    eval_total_complex(&spec.compile()?, &spec.corrections, s)
}

/// F_total at a real point s > 0.
pub fn transform_value_real(spec: &TransformSpec, s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "real transform evaluation needs s > 0, got {s}"
        )));
    }
    eval_total_real(&spec.compile()?, &spec.corrections, s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InversionMethod {
    Stehfest,
    Gli,
    Mgi,
}

impl InversionMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            InversionMethod::Stehfest => "stehfest",
            InversionMethod::Gli => "gli",
            InversionMethod::Mgi => "mgi",
        }
    }
}

impl std::str::FromStr for InversionMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stehfest" => Ok(InversionMethod::Stehfest),
            "gli" => Ok(InversionMethod::Gli),
            "mgi" => Ok(InversionMethod::Mgi),
            other => Err(Error::InvalidArgument(format!(
                "unknown inversion method '{other}' (expected stehfest, gli, or mgi)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InversionConfig {
    pub method: InversionMethod,
    /// Quadrature order for gli/mgi.
    pub order: usize,
    /// Number of Stehfest terms (even, 2..=18).
    pub stehfest_n: usize,
    /// Weight exponent for mgi.
    pub gamma_param: f64,
}

impl InversionConfig {
    pub fn new(method: InversionMethod) -> Self {
        InversionConfig {
            method,
            order: 32,
            stehfest_n: 14,
            gamma_param: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.method {
            InversionMethod::Stehfest => {
                check_stehfest_n(self.stehfest_n)?;
            }
            InversionMethod::Gli => {
                if self.order < 1 {
                    return Err(Error::InvalidArgument("rule order must be >= 1".into()));
                }
            }
            InversionMethod::Mgi => {
                if self.order < 1 {
                    return Err(Error::InvalidArgument("rule order must be >= 1".into()));
                }
                if !(self.gamma_param > -1.0) || !self.gamma_param.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "weight exponent must exceed -1, got {}",
                        self.gamma_param
                    )));
                }
            }
        }
        Ok(())
    }
}

fn check_stehfest_n(n: usize) -> Result<()> {
    if !(2..=18).contains(&n) || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "Stehfest term count must be even and within 2..=18, got {n}"
        )));
    }
    Ok(())
}

/// Stehfest weights V_1..V_N. All factorials stay <= 18! and are exact in
/// doubles; the alternating sums grow like 10^8 at N = 18, which bounds the
/// usable range.
pub fn stehfest_coefficients(n: usize) -> Result<Vec<f64>> {
    check_stehfest_n(n)?;
    let mut fact = [1.0f64; 19];
    for i in 1..19 {
        fact[i] = fact[i - 1] * i as f64;
    }
    let half = n / 2;
    let mut v = Vec::with_capacity(n);
    for k in 1..=n {
        let mut sum = 0.0;
        for j in k.div_ceil(2)..=k.min(half) {
            let num = (j as f64).powi(half as i32) * fact[2 * j];
            let den = fact[half - j] * fact[j] * fact[j - 1] * fact[k - j] * fact[2 * j - k];
            sum += num / den;
        }
        let sign = if (half + k) % 2 == 0 { 1.0 } else { -1.0 };
        v.push(sign * sum);
    }
    Ok(v)
}

/// Recover f(t) from its transform at a single t > 0.
pub fn invert(spec: &TransformSpec, t: f64, config: &InversionConfig) -> Result<f64> {
    config.validate()?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "inversion time must be positive and finite, got {t}"
        )));
    }
    let ast = spec.compile()?;
    let value = match config.method {
        InversionMethod::Stehfest => {
            let s_min = LN_2 / t;
            if s_min <= spec.c0 {
                return Err(Error::ContourViolation {
                    c: s_min,
                    c0: spec.c0,
                });
            }
            let coeffs = stehfest_coefficients(config.stehfest_n)?;
            let mut acc = 0.0;
            for (k, vk) in coeffs.iter().enumerate() {
                let s = (k as f64 + 1.0) * LN_2 / t;
                acc += vk * eval_total_real(&ast, &spec.corrections, s)?;
            }
            acc * LN_2 / t
        }
        InversionMethod::Gli | InversionMethod::Mgi => {
            let (kind, g) = match config.method {
                InversionMethod::Gli => (RuleKind::Laguerre, 0.0),
                _ => (RuleKind::Mgi, config.gamma_param),
            };
            let rule = quadrature::make_rule(kind, config.order, g)?;
            let c = spec.c0 + 1.0;
            let mut acc = 0.0;
            for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
                let s = Complex64::new(c, x / t);
                let fv = eval_total_complex(&ast, &spec.corrections, s)?;
                let mut log_w = w.ln() + x;
                if kind == RuleKind::Mgi {
                    log_w -= g * x.ln();
                }
                acc += log_w.exp() * fv.re * x.cos();
            }
            2.0 * (c * t).exp() / (PI * t) * acc
        }
    };
    if !value.is_finite() {
        return Err(Error::NonFinite(format!(
            "inversion at t = {t} produced a non-finite value"
        )));
    }
    Ok(value)
}

/// Inverted value plus an empirical error estimate: the difference against a
/// refined run (doubled rule order, or two fewer Stehfest terms since the
/// term count is capped).
pub fn invert_with_estimate(
    spec: &TransformSpec,
    t: f64,
    config: &InversionConfig,
) -> Result<(f64, f64)> {
    let value = invert(spec, t, config)?;
    let mut refined = config.clone();
    match config.method {
        InversionMethod::Stehfest => {
            refined.stehfest_n = if config.stehfest_n == 2 {
                4
            } else {
                config.stehfest_n - 2
            };
        }
        InversionMethod::Gli | InversionMethod::Mgi => {
            refined.order = config.order * 2;
        }
    }
    let other = invert(spec, t, &refined)?;
    Ok((value, (value - other).abs()))
}

/// A named time-domain function together with its transform, used for
/// round-trip checks and as ready-made CLI inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformPair {
    pub name: String,
    pub param: Option<f64>,
    /// Expression in `t` for the original function.
    pub function_text: String,
    pub transform: TransformSpec,
}

fn signed_shift(base: &str, a: f64) -> String {
    if a < 0.0 {
        format!("{base}-{}", -a)
    } else {
        format!("{base}+{a}")
    }
}

fn make_pair(name: &str, param: Option<f64>) -> Result<TransformPair> {
    let reject_param = |name: &str| -> Result<()> {
        if param.is_some() {
            return Err(Error::InvalidArgument(format!(
                "pair '{name}' does not take a parameter"
            )));
        }
        Ok(())
    };
    let pair = match name {
        "one" => {
            reject_param("one")?;
            TransformPair {
                name: "one".into(),
                param: None,
                function_text: "1".into(),
                transform: TransformSpec::new("1/s", 0.0),
            }
        }
        "t" => {
            reject_param("t")?;
            TransformPair {
                name: "t".into(),
                param: None,
                function_text: "t".into(),
                transform: TransformSpec::new("1/s^2", 0.0),
            }
        }
        "power" => {
            let p = param.unwrap_or(0.5);
            if !(p > -1.0) || !p.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "power pair needs exponent > -1, got {p}"
                )));
            }
            TransformPair {
                name: "power".into(),
                param: Some(p),
                function_text: format!("t^{p}"),
                transform: TransformSpec::new(
                    format!("{}/s^{}", specfun::gamma(p + 1.0)?, p + 1.0),
                    0.0,
                ),
            }
        }
        "exp" => {
            let a = param.unwrap_or(1.0);
            if !a.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "exp pair needs a finite rate, got {a}"
                )));
            }
            TransformPair {
                name: "exp".into(),
                param: Some(a),
                function_text: format!("exp({}*t)", -a),
                transform: TransformSpec::new(format!("1/({})", signed_shift("s", a)), -a),
            }
        }
        "sin" => {
            let w = param.unwrap_or(1.0);
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "sin pair needs a positive frequency, got {w}"
                )));
            }
            TransformPair {
                name: "sin".into(),
                param: Some(w),
                function_text: format!("sin({w}*t)"),
                transform: TransformSpec::new(format!("{w}/(s^2+{})", w * w), 0.0),
            }
        }
        "cos" => {
            let w = param.unwrap_or(1.0);
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "cos pair needs a positive frequency, got {w}"
                )));
            }
            TransformPair {
                name: "cos".into(),
                param: Some(w),
                function_text: format!("cos({w}*t)"),
                transform: TransformSpec::new(format!("s/(s^2+{})", w * w), 0.0),
            }
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown pair '{other}' (expected one, t, power, exp, sin, or cos)"
            )))
        }
    };
    Ok(pair)
}

/// The builtin registry with default parameters.
pub fn builtin_pairs() -> Vec<TransformPair> {
    ["one", "t", "power", "exp", "sin", "cos"]
        .iter()
        .map(|n| make_pair(n, None).expect("builtin pair"))
        .collect()
}

/// Resolve "name" or "name:param" against the registry.
pub fn lookup_pair(spec: &str) -> Result<TransformPair> {
    match spec.split_once(':') {
        None => make_pair(spec, None),
        Some((name, param_text)) => {
            let param: f64 = param_text.parse().map_err(|_| {
                Error::InvalidArgument(format!(
                    "pair parameter '{param_text}' is not a valid number"
                ))
            })?;
            make_pair(name, Some(param))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg(method: InversionMethod) -> InversionConfig {
        InversionConfig::new(method)
    }

    #[test]
    fn stehfest_weights_smallest_case() {
        assert_eq!(stehfest_coefficients(2).unwrap(), vec![2.0, -2.0]);
    }

    #[test]
    fn stehfest_weight_identities() {
        for n in (2..=18).step_by(2) {
            let v = stehfest_coefficients(n).unwrap();
            assert_eq!(v.len(), n);
            let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let sum0: f64 = v.iter().sum();
            let sum1: f64 = v.iter().enumerate().map(|(k, x)| x / (k + 1) as f64).sum();
            assert!(sum0.abs() <= 1e-8 * vmax, "N={n}: sum {sum0} vs max {vmax}");
            assert!(
                (sum1 - 1.0).abs() <= 1e-8 * vmax.max(1.0),
                "N={n}: first-moment sum {sum1}"
            );
        }
    }

    #[test]
    fn stehfest_term_count_validation() {
        assert!(stehfest_coefficients(13).is_err());
        assert!(stehfest_coefficients(0).is_err());
        assert!(stehfest_coefficients(20).is_err());
    }

    #[test]
    fn transform_evaluation_with_corrections() {
        let mut spec = TransformSpec::new("1/s", 0.0);
        spec.corrections.push((1.0, -1.0));
        // F_total = 1/s - s^{-1} = 0 everywhere
        assert!(transform_value_real(&spec, 3.0).unwrap().abs() < 1e-15);
        let v = transform_value(&spec, Complex64::new(1.0, 2.0)).unwrap();
        assert!(v.norm() < 1e-15);
        for m in [
            InversionMethod::Stehfest,
            InversionMethod::Gli,
            InversionMethod::Mgi,
        ] {
            assert!(invert(&spec, 1.0, &cfg(m)).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn transform_complex_point() {
        let spec = TransformSpec::new("1/(s+1)", -1.0);
        let v = transform_value(&spec, Complex64::new(2.0, 1.0)).unwrap();
        assert_relative_eq!(v.re, 0.3, epsilon = 1e-15);
        assert_relative_eq!(v.im, -0.1, epsilon = 1e-15);
    }

    #[test]
    fn stehfest_constant_recovery() {
        let spec = TransformSpec::new("1/s", 0.0);
        for t in [0.1, 1.0, 10.0] {
            let v = invert(&spec, t, &cfg(InversionMethod::Stehfest)).unwrap();
            assert_relative_eq!(v, 1.0, max_relative = 1e-8);
        }
    }

    #[test]
    fn stehfest_ramp_recovery() {
        // plateau error of the 14-term rule on 1/s^2 sits near 3.6e-7 relative
        let spec = TransformSpec::new("1/s^2", 0.0);
        let v = invert(&spec, 2.0, &cfg(InversionMethod::Stehfest)).unwrap();
        assert_relative_eq!(v, 2.0, max_relative = 1e-6);
    }

    #[test]
    fn stehfest_decaying_exponential() {
        let spec = TransformSpec::new("1/(s+1)", -1.0);
        let v = invert(&spec, 1.0, &cfg(InversionMethod::Stehfest)).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 2e-6);
    }

    #[test]
    fn contour_rules_ramp_recovery() {
        let spec = TransformSpec::new("1/s^2", 0.0);
        let mut c = cfg(InversionMethod::Gli);
        c.order = 64;
        let v = invert(&spec, 1.0, &c).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-2);
        let mut c = cfg(InversionMethod::Mgi);
        c.order = 64;
        let v = invert(&spec, 1.0, &c).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 2e-2);
    }

    #[test]
    fn generalized_contour_rule_at_zero_exponent_matches_plain() {
        let spec = TransformSpec::new("1/(s+1)", -1.0);
        let gli = cfg(InversionMethod::Gli);
        let mut mgi = cfg(InversionMethod::Mgi);
        mgi.gamma_param = 0.0;
        for t in [0.5, 1.0, 2.0] {
            let a = invert(&spec, t, &gli).unwrap();
            let b = invert(&spec, t, &mgi).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
    }

    #[test]
    fn inversion_is_linear() {
        let one = TransformSpec::new("1/s", 0.0);
        let ramp = TransformSpec::new("1/s^2", 0.0);
        let combo = TransformSpec::new("2/s + 3/s^2", 0.0);
        for m in [
            InversionMethod::Stehfest,
            InversionMethod::Gli,
            InversionMethod::Mgi,
        ] {
            let c = cfg(m);
            let lhs = invert(&combo, 1.5, &c).unwrap();
            let rhs = 2.0 * invert(&one, 1.5, &c).unwrap() + 3.0 * invert(&ramp, 1.5, &c).unwrap();
            // the alternating Stehfest weights (~1e6 at N=14) amplify
            // evaluation rounding, so exact linearity degrades accordingly
            let tol = if m == InversionMethod::Stehfest {
                1e-8
            } else {
                1e-12
            };
            assert_relative_eq!(lhs, rhs, max_relative = tol);
        }
    }

    #[test]
    fn inversion_respects_time_scaling() {
        // (1/2) * 1/(s/2 + 1) transforms e^{-2t}
        let spec = TransformSpec::new("(1/2) * (1/(s/2+1))", -2.0);
        let v = invert(&spec, 0.5, &cfg(InversionMethod::Stehfest)).unwrap();
        assert_relative_eq!(v, (-1.0f64).exp(), max_relative = 1e-5);
    }

    #[test]
    fn growing_exponential_violates_stehfest_contour() {
        let pair = lookup_pair("exp:-5").unwrap(); // e^{5t}, c0 = 5
        assert_eq!(pair.transform.c0, 5.0);
        let err = invert(&pair.transform, 1.0, &cfg(InversionMethod::Stehfest)).unwrap_err();
        assert!(matches!(err, Error::ContourViolation { .. }));
    }

    #[test]
    fn invalid_time_rejected() {
        let spec = TransformSpec::new("1/s", 0.0);
        assert!(invert(&spec, 0.0, &cfg(InversionMethod::Stehfest)).is_err());
        assert!(invert(&spec, -1.0, &cfg(InversionMethod::Gli)).is_err());
    }

    #[test]
    fn estimate_tracks_true_error() {
        let spec = TransformSpec::new("1/(s+1)", -1.0);
        let (v, est) = invert_with_estimate(&spec, 1.0, &cfg(InversionMethod::Stehfest)).unwrap();
        let truth = (-1.0f64).exp();
        assert!(est > 0.0);
        assert!((v - truth).abs() <= 10.0 * est.max(1e-9));

        let mut c = cfg(InversionMethod::Gli);
        c.order = 32;
        let (v, est) = invert_with_estimate(&spec, 1.0, &c).unwrap();
        assert!(est > 0.0 && (v - truth).abs() <= 1e-1 && est <= 1e-1);
    }

    #[test]
    fn registry_contents() {
        let pairs = builtin_pairs();
        let names: Vec<&str> = pairs.iter().map(|p| p.name.as_str()).collect();
        assert_eq!(names, vec!["one", "t", "power", "exp", "sin", "cos"]);
        for p in &pairs {
            // both texts must parse in their own variable
            expr::parse(&p.function_text, "t").unwrap();
            expr::parse(&p.transform.expression, "s").unwrap();
        }
    }

    #[test]
    fn pair_lookup_and_parameters() {
        let p = lookup_pair("power:0.5").unwrap();
        assert_eq!(p.function_text, "t^0.5");
        assert_eq!(p.transform.c0, 0.0);
        assert!(p.transform.expression.ends_with("/s^1.5"));

        let p = lookup_pair("exp").unwrap();
        assert_eq!(p.function_text, "exp(-1*t)");
        assert_eq!(p.transform.expression, "1/(s+1)");
        assert_eq!(p.transform.c0, -1.0);

        let p = lookup_pair("exp:-2").unwrap();
        assert_eq!(p.function_text, "exp(2*t)");
        assert_eq!(p.transform.expression, "1/(s-2)");
        assert_eq!(p.transform.c0, 2.0);

        let p = lookup_pair("sin:2").unwrap();
        assert_eq!(p.transform.expression, "2/(s^2+4)");

        assert!(lookup_pair("one:2").is_err());
        assert!(lookup_pair("nope").is_err());
        assert!(lookup_pair("sin:0").is_err());
        assert!(lookup_pair("power:abc").is_err());
        assert!(lookup_pair("power:-2").is_err());
    }

    #[test]
    fn pair_function_texts_evaluate() {
        let t = 0.7;
        let cases: Vec<(&str, f64)> = vec![
            ("one", 1.0),
            ("t", t),
            ("power", t.sqrt()),
            ("exp", (-t).exp()),
            ("sin", t.sin()),
            ("cos", t.cos()),
        ];
        for (name, expected) in cases {
            let p = lookup_pair(name).unwrap();
            let ast = expr::parse(&p.function_text, "t").unwrap();
            let v = expr::eval_real(&ast, t).unwrap();
            assert_relative_eq!(v, expected, max_relative = 1e-14);
        }
    }

    type TimeFn = fn(f64) -> f64;

    #[test]
    fn smooth_pair_round_trips_stehfest() {
        // measured plateau accuracy of the 14-term rule per pair
        let cases: [(&str, f64, TimeFn); 4] = [
            ("one", 1e-7, |_| 1.0),
            ("t", 1e-5, |t| t),
            ("power", 1e-5, |t: f64| t.sqrt()),
            ("exp", 1e-4, |t: f64| (-t).exp()),
        ];
        let c = cfg(InversionMethod::Stehfest);
        for (name, tol, f) in cases {
            let p = lookup_pair(name).unwrap();
            for t in [0.5, 1.0, 2.0] {
                let v = invert(&p.transform, t, &c).unwrap();
                let truth = f(t);
                assert!(
                    (v - truth).abs() <= tol * truth.abs().max(1.0),
                    "{name} at t={t}: {v} vs {truth}"
                );
            }
        }
    }

    #[test]
    fn oscillatory_pair_round_trips_stehfest() {
        // real-axis sampling degrades quickly with t for sin/cos
        let c = cfg(InversionMethod::Stehfest);
        for name in ["sin", "cos"] {
            let p = lookup_pair(name).unwrap();
            for (t, tol) in [(0.5, 2e-3), (1.0, 2e-3), (2.0, 3e-2)] {
                let v = invert(&p.transform, t, &c).unwrap();
                let truth = if name == "sin" { t.sin() } else { t.cos() };
                assert!((v - truth).abs() <= tol, "{name} at t={t}: {v} vs {truth}");
            }
        }
    }

    #[test]
    fn contour_rule_round_trips() {
        // documented accuracy at order 64 on t in [0.5, 2]
        let mut gli = cfg(InversionMethod::Gli);
        gli.order = 64;
        let mut mgi = cfg(InversionMethod::Mgi);
        mgi.order = 64;
        let cases: [(&str, TimeFn); 4] = [
            ("one", |_| 1.0),
            ("t", |t| t),
            ("power", |t: f64| t.sqrt()),
            ("exp", |t: f64| (-t).exp()),
        ];
        for (name, f) in cases {
            let p = lookup_pair(name).unwrap();
            for t in [0.5, 1.0, 2.0] {
                for (label, c) in [("gli", &gli), ("mgi", &mgi)] {
                    let v = invert(&p.transform, t, c).unwrap();
                    let truth = f(t);
                    assert!(
                        (v - truth).abs() <= 7e-2 * truth.abs().max(1.0),
                        "{label} {name} at t={t}: {v} vs {truth}"
                    );
                }
            }
        }
    }

    #[test]
    fn config_validation() {
        let mut c = cfg(InversionMethod::Stehfest);
        c.stehfest_n = 13;
        assert!(c.validate().is_err());
        let mut c = cfg(InversionMethod::Gli);
        c.order = 0;
        assert!(c.validate().is_err());
        let mut c = cfg(InversionMethod::Mgi);
        c.gamma_param = -1.5;
        assert!(c.validate().is_err());
    }
}
