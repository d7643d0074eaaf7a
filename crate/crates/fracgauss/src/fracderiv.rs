//! Fractional derivatives of three classical flavours.
//!
//! For order a > 0 with n = ceil(a):
//!
//! * Riemann-Liouville ("rl"): differentiate the (n-a)-fold integral n times.
//! * Caputo ("caputo"): integrate the n-th derivative (n-a)-fold. Equals
//!   rl minus the polynomial boundary layer sum_k f^(k)(0) t^{k-a} / Gamma(k+1-a).
//! * Grunwald-Letnikov ("gl"): the limit of the fractional backward
//!   difference; coincides with rl for the function classes handled here.
//!
//! Four computational routes are wired up: the truncated GL sum on a uniform
//! grid, a Gauss-Legendre evaluation of the Caputo integral after the
//! substitution u = (t - tau)^{n-a} (which removes the endpoint singularity),
//! and transform-space routes that multiply the Laplace transform by s^a
//! (plus Caputo initial-value corrections) and invert numerically.

use crate::error::{Error, Result};
use crate::expr::{self, Ast, BinOp, Func};
use crate::laplace::{self, InversionConfig, InversionMethod, TransformSpec};
use crate::quadrature::{self, RuleKind};
use crate::specfun;

/// A differentiation order a > 0, split into the ceiling n and the
/// fractional part. Orders within 1e-12 of an integer are snapped onto it so
/// that e.g. a = 2 - 1e-15 does not act as n = 2, frac ~= 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalOrder {
    pub alpha: f64,
    pub n_ceil: usize,
    pub frac: f64,
}

impl FractionalOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "differentiation order must be positive and finite, got {alpha}"
            )));
        }
        let r = alpha.round();
        if r > 0.0 && (alpha - r).abs() <= specfun::INTEGER_TOL {
            return Ok(FractionalOrder {
                alpha: r,
                n_ceil: r as usize,
                frac: 0.0,
            });
        }
        Ok(FractionalOrder {
            alpha,
            n_ceil: alpha.ceil() as usize,
            frac: alpha - alpha.floor(),
        })
    }

    pub fn is_integer(&self) -> bool {
        self.frac == 0.0
    }
}

/// A time-domain function given as an expression in `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    pub expression: String,
}

impl FunctionSpec {
    pub fn new(expression: impl Into<String>) -> Self {
        FunctionSpec {
            expression: expression.into(),
        }
    }

    fn compile(&self) -> Result<Ast> {
        expr::parse(&self.expression, "t")
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        expr::eval_real(&self.compile()?, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeClass {
    RiemannLiouville,
    Caputo,
    GrunwaldLetnikov,
}

impl DerivativeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            DerivativeClass::RiemannLiouville => "rl",
            DerivativeClass::Caputo => "caputo",
            DerivativeClass::GrunwaldLetnikov => "gl",
        }
    }
}

impl std::str::FromStr for DerivativeClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rl" => Ok(DerivativeClass::RiemannLiouville),
            "caputo" => Ok(DerivativeClass::Caputo),
            "gl" => Ok(DerivativeClass::GrunwaldLetnikov),
            other => Err(Error::InvalidArgument(format!(
                "unknown derivative class '{other}' (expected rl, caputo, or gl)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdMethod {
    GlSum,
    Direct,
    Stehfest,
    Gli,
    Mgi,
}

impl FdMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            FdMethod::GlSum => "glsum",
            FdMethod::Direct => "direct",
            FdMethod::Stehfest => "stehfest",
            FdMethod::Gli => "gli",
            FdMethod::Mgi => "mgi",
        }
    }

    pub fn uses_transform(self) -> bool {
        matches!(self, FdMethod::Stehfest | FdMethod::Gli | FdMethod::Mgi)
    }
}

impl std::str::FromStr for FdMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "glsum" => Ok(FdMethod::GlSum),
            "direct" => Ok(FdMethod::Direct),
            "stehfest" => Ok(FdMethod::Stehfest),
            "gli" => Ok(FdMethod::Gli),
            "mgi" => Ok(FdMethod::Mgi),
            other => Err(Error::InvalidArgument(format!(
                "unknown method '{other}' (expected glsum, direct, stehfest, gli, or mgi)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FdParams {
    /// Grid step for glsum.
    pub h: f64,
    /// Rule order for gli/mgi, and the Legendre order for direct.
    pub quad_order: usize,
    /// Stehfest term count.
    pub stehfest_n: usize,
    /// f(0), f'(0), ... f^(n-1)(0) when known; estimated numerically
    /// otherwise. Only consulted where a route needs initial values.
    pub init: Option<Vec<f64>>,
}

impl Default for FdParams {
    fn default() -> Self {
        FdParams {
            h: 1e-4,
            quad_order: 32,
            stehfest_n: 14,
            init: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdValue {
    pub value: f64,
    /// Difference against a refined run (halved step, doubled order, or two
    /// fewer Stehfest terms); an empirical bound, not a guarantee.
    pub est_error: f64,
}

/// sum_k init_k t^{k-a} / Gamma(k+1-a) - the layer separating rl from caputo.
fn boundary_layer(init: &[f64], order: &FractionalOrder, t: f64) -> Result<f64> {
    let mut sum = 0.0;
    for (k, v) in init.iter().enumerate() {
        if *v == 0.0 {
            continue;
        }
        let kf = k as f64;
        sum += v * t.powf(kf - order.alpha) * specfun::recip_gamma(kf + 1.0 - order.alpha);
    }
    Ok(sum)
}

fn check_init_len(init: &[f64], order: &FractionalOrder) -> Result<()> {
    if !init.is_empty() && init.len() != order.n_ceil {
        return Err(Error::InvalidArgument(format!(
            "expected {} initial values (or none), got {}",
            order.n_ceil,
            init.len()
        )));
    }
    Ok(())
}

/// Convert a Caputo value into the rl value at the same point. An empty
/// `init` stands for all-zero initial values and is a no-op.
pub fn rl_from_caputo(
    caputo_value: f64,
    init: &[f64],
    order: &FractionalOrder,
    t: f64,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "evaluation time must be positive, got {t}"
        )));
    }
    check_init_len(init, order)?;
    Ok(caputo_value + boundary_layer(init, order, t)?)
}

/// Derivative of t^p in closed form: Gamma(p+1)/Gamma(p+1-a) * t^{p-a}, with
/// the reciprocal-gamma convention mapping poles to an exact zero. Caputo
/// annihilates non-negative integer powers below n and is undefined for
/// other powers below n.
pub fn closed_form_power(
    p: f64,
    order: &FractionalOrder,
    class: DerivativeClass,
    t: f64,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "evaluation time must be positive, got {t}"
        )));
    }
    if !(p > -1.0) {
        return Err(Error::InvalidArgument(format!(
            "power must exceed -1, got {p}"
        )));
    }
    if class == DerivativeClass::Caputo {
        let r = p.round();
        if r >= 0.0 && (p - r).abs() <= specfun::INTEGER_TOL {
            if (r as usize) < order.n_ceil {
                return Ok(0.0);
            }
        } else if p < order.n_ceil as f64 {
            return Err(Error::InvalidArgument(format!(
                "Caputo derivative of t^{p} needs power >= {} or a non-negative integer",
                order.n_ceil
            )));
        }
    }
    let a = order.alpha;
    Ok(specfun::gamma(p + 1.0)? * specfun::recip_gamma(p + 1.0 - a) * t.powf(p - a))
}

fn eval_at(ast: &Ast, t: f64) -> Result<f64> {
    // the last grid point may land at -1e-16 instead of 0
    expr::eval_real(ast, if t < 0.0 { 0.0 } else { t })
}

/// Truncated Grunwald-Letnikov sum on a uniform grid:
/// h^{-a} sum_{j=0}^{floor(t/h)} w_j f(t - j h), first-order accurate in h.
pub fn fd_gl_sum(f: &FunctionSpec, order: &FractionalOrder, t: f64, h: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "evaluation time must be positive and finite, got {t}"
        )));
    }
    if !(h > 0.0) || h > t {
        return Err(Error::InvalidArgument(format!(
            "grid step must satisfy 0 < h <= t, got h = {h} at t = {t}"
        )));
    }
    let ast = f.compile()?;
    let m = (t / h + 1e-9).floor() as usize;
    let w = specfun::gl_weights(order.alpha, m + 1)?;
    let mut sum = 0.0;
    for (j, wj) in w.iter().enumerate() {
        sum += wj * eval_at(&ast, t - j as f64 * h)?;
    }
    Ok(h.powf(-order.alpha) * sum)
}

fn numeric_derivative_fn<G: Fn(f64) -> Result<f64>>(
    g: &G,
    t: f64,
    k: usize,
    h: Option<f64>,
) -> Result<f64> {
    if k != 1 && k != 2 {
        return Err(Error::InvalidArgument(format!(
            "numeric differentiation supports orders 1 and 2, got {k}"
        )));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "differentiation point must be non-negative and finite, got {t}"
        )));
    }
    let h = match h {
        Some(h) if h > 0.0 && h.is_finite() => h,
        Some(h) => {
            return Err(Error::InvalidArgument(format!(
                "step must be positive and finite, got {h}"
            )))
        }
        // the second difference divides by h^2, so it needs a coarser step
        // before rounding noise takes over
        None => match k {
            1 => 1e-5f64.max(1e-7 * t.abs()),
            _ => 1e-3f64.max(1e-7 * t.abs()),
        },
    };
    if t < 2.0 * h {
        // forward stencils, second order: the domain ends at 0 on the left
        return if k == 1 {
            Ok((-3.0 * g(t)? + 4.0 * g(t + h)? - g(t + 2.0 * h)?) / (2.0 * h))
        } else {
            Ok((2.0 * g(t)? - 5.0 * g(t + h)? + 4.0 * g(t + 2.0 * h)? - g(t + 3.0 * h)?) / (h * h))
        };
    }
    let diff = |h: f64| -> Result<f64> {
        if k == 1 {
            Ok((g(t + h)? - g(t - h)?) / (2.0 * h))
        } else {
            Ok((g(t + h)? - 2.0 * g(t)? + g(t - h)?) / (h * h))
        }
    };
    // one Richardson step on the central difference
    let d1 = diff(h)?;
    let d2 = diff(h / 2.0)?;
    let v = (4.0 * d2 - d1) / 3.0;
    if !v.is_finite() {
        return Err(Error::NonFinite(format!(
            "numeric derivative at t = {t} is not finite"
        )));
    }
    Ok(v)
}

/// k-th derivative (k = 1 or 2) by central differences with one Richardson
/// extrapolation, falling back to one-sided stencils within 2h of t = 0.
pub fn numeric_derivative(f: &FunctionSpec, t: f64, k: usize, h: Option<f64>) -> Result<f64> {
    let ast = f.compile()?;
    numeric_derivative_fn(&|x| expr::eval_real(&ast, x), t, k, h)
}

/// Caputo derivative through the desingularized integral
/// (1/Gamma(q+1)) * int_0^{t^q} f^(n)(t - u^{1/q}) du,   q = n - a,
/// evaluated with an affine-mapped Gauss-Legendre rule. Needs a genuinely
/// fractional order with n <= 2 (the inner derivative is numeric).
pub fn fd_caputo_direct(
    f: &FunctionSpec,
    order: &FractionalOrder,
    t: f64,
    legendre_order: usize,
) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "evaluation time must be positive and finite, got {t}"
        )));
    }
    if order.is_integer() {
        return Err(Error::InvalidArgument(
            "the direct route needs a non-integer order".into(),
        ));
    }
    if order.n_ceil > 2 {
        return Err(Error::InvalidArgument(format!(
            "the direct route supports orders below 2, got {}",
            order.alpha
        )));
    }
    if legendre_order < 8 {
        return Err(Error::InvalidArgument(format!(
            "the direct route needs a Legendre order of at least 8, got {legendre_order}"
        )));
    }
    let n = order.n_ceil;
    let q = n as f64 - order.alpha;
    let ast = f.compile()?;
    let g = |x: f64| expr::eval_real(&ast, x);
    let rule = quadrature::make_rule(RuleKind::Legendre, legendre_order, 0.0)?;
    let upper = t.powf(q);
    let mut acc = 0.0;
    for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
        let u = 0.5 * (x + 1.0) * upper;
        let tau = t - u.powf(1.0 / q);
        acc += w * numeric_derivative_fn(&g, tau.max(0.0), n, None)?;
    }
    let value = 0.5 * upper * acc * specfun::recip_gamma(q + 1.0);
    if !value.is_finite() {
        return Err(Error::NonFinite(format!(
            "direct evaluation at t = {t} is not finite"
        )));
    }
    Ok(value)
}

/// Transform of the derivative: s^a F_total(s) with the class's boundary
/// handling folded into the correction list.
///
/// * gl: plain multiplication, initial values ignored.
/// * caputo: subtracts init_k s^{a-1-k} for each nonzero initial value.
/// * rl: only representable here when the initial values vanish (the rl
///   boundary terms are not powers of s); otherwise refused.
///
/// The abscissa is raised to at least 0 because s^a branches at the origin.
pub fn laplace_multiplier(
    transform: &TransformSpec,
    order: &FractionalOrder,
    class: DerivativeClass,
    init: &[f64],
) -> Result<TransformSpec> {
    check_init_len(init, order)?;
    let a = order.alpha;
    let mut out = TransformSpec {
        expression: format!("(s^{a}) * ({})", transform.expression),
        corrections: transform
            .corrections
            .iter()
            .map(|&(c, p)| (c, p + a))
            .collect(),
        c0: transform.c0.max(0.0),
    };
    match class {
        DerivativeClass::GrunwaldLetnikov => {}
        DerivativeClass::Caputo => {
            for (k, v) in init.iter().enumerate() {
                if *v != 0.0 {
                    out.corrections.push((*v, a - 1.0 - k as f64));
                }
            }
        }
        DerivativeClass::RiemannLiouville => {
            if init.iter().any(|v| *v != 0.0) {
                return Err(Error::Unsupported(
                    "rl boundary terms are not expressible as transform corrections; \
                     use the caputo multiplier and add the boundary layer in the time domain"
                        .into(),
                ));
            }
        }
    }
    Ok(out)
}

fn const_value(ast: &Ast) -> Option<f64> {
    match ast {
        Ast::Number(v) => Some(*v),
        Ast::Neg(inner) => const_value(inner).map(|v| -v),
        _ => None,
    }
}

fn linear_coefficient(ast: &Ast) -> Option<f64> {
    match ast {
        Ast::Var => Some(1.0),
        Ast::Neg(inner) => linear_coefficient(inner).map(|c| -c),
        Ast::Bin(BinOp::Mul, a, b) => match (a.as_ref(), b.as_ref()) {
            (lhs, Ast::Var) => const_value(lhs),
            (Ast::Var, rhs) => const_value(rhs),
            _ => None,
        },
        _ => None,
    }
}

fn scale_spec(mut spec: TransformSpec, c: f64) -> TransformSpec {
    spec.expression = format!("{c} * ({})", spec.expression);
    spec.corrections = spec.corrections.iter().map(|&(a, p)| (c * a, p)).collect();
    spec
}

fn combine_specs(a: TransformSpec, b: TransformSpec, op: char) -> TransformSpec {
    let mut out = TransformSpec::new(
        format!("({}) {op} ({})", a.expression, b.expression),
        a.c0.max(b.c0),
    );
    out.corrections = a.corrections;
    let sign = if op == '-' { -1.0 } else { 1.0 };
    out.corrections
        .extend(b.corrections.iter().map(|&(c, p)| (sign * c, p)));
    out
}

/// Recognize functions whose transform is known in closed form: constants,
/// t, t^p, exp(c t), sin(w t), cos(w t), and sums/differences/constant
/// multiples of those. Returns None for anything else.
pub fn match_transform(ast: &Ast) -> Option<TransformSpec> {
    match ast {
        Ast::Number(c) => Some(TransformSpec::new(format!("{c}/s"), 0.0)),
        Ast::Var => Some(TransformSpec::new("1/s^2", 0.0)),
        Ast::Neg(inner) => {
            let mut spec = match_transform(inner)?;
            spec.expression = format!("-({})", spec.expression);
            spec.corrections = spec.corrections.iter().map(|&(c, p)| (-c, p)).collect();
            Some(spec)
        }
        Ast::Bin(BinOp::Pow, base, exp) => match (base.as_ref(), const_value(exp)) {
            (Ast::Var, Some(p)) if p > -1.0 => {
                let g = specfun::gamma(p + 1.0).ok()?;
                Some(TransformSpec::new(format!("{g}/s^{}", p + 1.0), 0.0))
            }
            _ => None,
        },
        Ast::Bin(BinOp::Add, a, b) => {
            Some(combine_specs(match_transform(a)?, match_transform(b)?, '+'))
        }
        Ast::Bin(BinOp::Sub, a, b) => {
            Some(combine_specs(match_transform(a)?, match_transform(b)?, '-'))
        }
        Ast::Bin(BinOp::Mul, a, b) => match (const_value(a), const_value(b)) {
            (Some(c), None) => Some(scale_spec(match_transform(b)?, c)),
            (None, Some(c)) => Some(scale_spec(match_transform(a)?, c)),
            (Some(c), Some(d)) => Some(TransformSpec::new(format!("{}/s", c * d), 0.0)),
            (None, None) => None,
        },
        Ast::Bin(BinOp::Div, a, b) => {
            let d = const_value(b)?;
            if d == 0.0 {
                return None;
            }
            Some(scale_spec(match_transform(a)?, 1.0 / d))
        }
        Ast::Call(Func::Exp, arg) => {
            let c = linear_coefficient(arg)?;
            laplace::lookup_pair(&format!("exp:{}", -c))
                .ok()
                .map(|p| p.transform)
        }
        Ast::Call(Func::Sin, arg) => {
            let w = linear_coefficient(arg)?;
            if w > 0.0 {
                laplace::lookup_pair(&format!("sin:{w}"))
                    .ok()
                    .map(|p| p.transform)
            } else {
                None
            }
        }
        Ast::Call(Func::Cos, arg) => {
            let w = linear_coefficient(arg)?;
            if w != 0.0 {
                laplace::lookup_pair(&format!("cos:{}", w.abs()))
                    .ok()
                    .map(|p| p.transform)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Initial values for the boundary layer: taken from params when supplied,
/// measured numerically at t = 0 otherwise.
fn resolve_init(f: &FunctionSpec, order: &FractionalOrder, params: &FdParams) -> Result<Vec<f64>> {
    if let Some(init) = &params.init {
        check_init_len(init, order)?;
        if init.is_empty() {
            return Ok(vec![0.0; order.n_ceil]);
        }
        return Ok(init.clone());
    }
    if order.n_ceil > 3 {
        return Err(Error::Unsupported(format!(
            "cannot estimate {} initial derivatives numerically; pass them explicitly",
            order.n_ceil
        )));
    }
    let mut init = vec![f.eval(0.0)?];
    for k in 1..order.n_ceil {
        init.push(numeric_derivative(f, 0.0, k, None)?);
    }
    Ok(init)
}

/// One fractional-derivative evaluation. Transform-space methods use the
/// supplied transform, or recognize one from the function's shape; the
/// rl/caputo distinction is realized through the boundary layer, built from
/// the initial values.
pub fn fd_compute(
    f: &FunctionSpec,
    transform: Option<&TransformSpec>,
    order: &FractionalOrder,
    class: DerivativeClass,
    method: FdMethod,
    params: &FdParams,
    t: f64,
) -> Result<FdValue> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "evaluation time must be positive and finite, got {t}"
        )));
    }
    match method {
        FdMethod::GlSum => {
            let correction = if class == DerivativeClass::Caputo {
                boundary_layer(&resolve_init(f, order, params)?, order, t)?
            } else {
                0.0
            };
            let v1 = fd_gl_sum(f, order, t, params.h)? - correction;
            let v2 = fd_gl_sum(f, order, t, params.h / 2.0)? - correction;
            Ok(FdValue {
                value: v1,
                est_error: (v1 - v2).abs(),
            })
        }
        FdMethod::Direct => {
            let init = match class {
                DerivativeClass::Caputo => Vec::new(),
                _ => resolve_init(f, order, params)?,
            };
            let run = |n: usize| -> Result<f64> {
                let cap = fd_caputo_direct(f, order, t, n)?;
                match class {
                    DerivativeClass::Caputo => Ok(cap),
                    _ => rl_from_caputo(cap, &init, order, t),
                }
            };
            let v1 = run(params.quad_order)?;
            let v2 = run(params.quad_order * 2)?;
            Ok(FdValue {
                value: v1,
                est_error: (v1 - v2).abs(),
            })
        }
        FdMethod::Stehfest | FdMethod::Gli | FdMethod::Mgi => {
            let base = match transform {
                Some(spec) => spec.clone(),
                None => {
                    let ast = f.compile()?;
                    match_transform(&ast).ok_or_else(|| {
                        Error::Unsupported(format!(
                            "no known transform for '{}'; supply one explicitly",
                            f.expression
                        ))
                    })?
                }
            };
            let (mult, init) = match class {
                DerivativeClass::GrunwaldLetnikov => (
                    laplace_multiplier(&base, order, DerivativeClass::GrunwaldLetnikov, &[])?,
                    Vec::new(),
                ),
                _ => {
                    let init = resolve_init(f, order, params)?;
                    (
                        laplace_multiplier(&base, order, DerivativeClass::Caputo, &init)?,
                        init,
                    )
                }
            };
            let config = InversionConfig {
                method: match method {
                    FdMethod::Stehfest => InversionMethod::Stehfest,
                    FdMethod::Gli => InversionMethod::Gli,
                    _ => InversionMethod::Mgi,
                },
                order: params.quad_order,
                stehfest_n: params.stehfest_n,
                // the integrand decays like x^{-frac} along the contour
                gamma_param: order.frac,
            };
            let (raw, est) = laplace::invert_with_estimate(&mult, t, &config)?;
            let value = match class {
                DerivativeClass::RiemannLiouville => rl_from_caputo(raw, &init, order, t)?,
                _ => raw,
            };
            Ok(FdValue {
                value,
                est_error: est,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Gamma(2)/Gamma(1.5) = 2/sqrt(pi)
    const D_HALF_T: f64 = std::f64::consts::FRAC_2_SQRT_PI;
    const D_HALF_T2: f64 = 1.504_505_556_127_350_2; // Gamma(3)/Gamma(2.5)

    fn half() -> FractionalOrder {
        FractionalOrder::new(0.5).unwrap()
    }

    #[test]
    fn order_decomposition() {
        let o = half();
        assert_eq!((o.n_ceil, o.frac), (1, 0.5));
        let o = FractionalOrder::new(1.7).unwrap();
        assert_eq!(o.n_ceil, 2);
        assert_relative_eq!(o.frac, 0.7, epsilon = 1e-15);
        let o = FractionalOrder::new(2.0).unwrap();
        assert!(o.is_integer() && o.n_ceil == 2);
        // snapping: values a rounding error away from an integer act as it
        let o = FractionalOrder::new(3.0 - 1e-13).unwrap();
        assert!(o.is_integer() && o.n_ceil == 3 && o.alpha == 3.0);
        let o = FractionalOrder::new(2.0 + 1e-13).unwrap();
        assert!(o.is_integer() && o.n_ceil == 2);
        // a genuinely non-integer value nearby is kept
        let o = FractionalOrder::new(2.0000001).unwrap();
        assert_eq!(o.n_ceil, 3);
        assert!(!o.is_integer());
        assert!(FractionalOrder::new(0.0).is_err());
        assert!(FractionalOrder::new(-0.5).is_err());
        assert!(FractionalOrder::new(f64::NAN).is_err());
    }

    #[test]
    fn power_closed_forms() {
        let o = half();
        let rl = DerivativeClass::RiemannLiouville;
        let v = closed_form_power(0.5, &o, rl, 3.0).unwrap();
        assert_relative_eq!(v, 0.886_226_925_452_758, max_relative = 1e-14);
        let v = closed_form_power(1.0, &o, rl, 1.0).unwrap();
        assert_relative_eq!(v, D_HALF_T, max_relative = 1e-14);
        let v = closed_form_power(0.0, &o, rl, 1.0).unwrap();
        assert_relative_eq!(v, 0.564_189_583_547_756_3, max_relative = 1e-14);

        // caputo kills low-degree polynomials
        assert_eq!(
            closed_form_power(0.0, &o, DerivativeClass::Caputo, 1.0).unwrap(),
            0.0
        );
        let o15 = FractionalOrder::new(1.5).unwrap();
        assert_eq!(
            closed_form_power(1.0, &o15, DerivativeClass::Caputo, 2.0).unwrap(),
            0.0
        );
        assert!(closed_form_power(0.3, &o, DerivativeClass::Caputo, 1.0).is_err());

        // integer order annihilates lower powers through the gamma pole
        let o1 = FractionalOrder::new(1.0).unwrap();
        assert_eq!(closed_form_power(0.0, &o1, rl, 2.0).unwrap(), 0.0);

        assert!(closed_form_power(-1.5, &o, rl, 1.0).is_err());
        assert!(closed_form_power(0.5, &o, rl, 0.0).is_err());
    }

    #[test]
    fn gl_annihilation_matches_rl() {
        // d^{1/2}/dt^{1/2} of t^{-1/2} vanishes identically
        let o = half();
        let v = closed_form_power(-0.5, &o, DerivativeClass::RiemannLiouville, 1.0).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn boundary_layer_conversion() {
        let o = half();
        // caputo(t + 1) at t = 1, then back to rl
        let v = rl_from_caputo(D_HALF_T, &[1.0], &o, 1.0).unwrap();
        assert_relative_eq!(v, 1.692_568_750_643_269, max_relative = 1e-12);
        let v = rl_from_caputo(0.0, &[1.0], &o, 1.0).unwrap();
        assert_relative_eq!(v, 0.564_189_583_547_756_3, max_relative = 1e-12);
        // empty list = all zeros
        assert_eq!(rl_from_caputo(2.5, &[], &o, 1.0).unwrap(), 2.5);
        let o2 = FractionalOrder::new(1.5).unwrap();
        assert!(rl_from_caputo(0.0, &[1.0], &o2, 1.0).is_err()); // needs 2 values
        assert!(rl_from_caputo(0.0, &[1.0], &o, 0.0).is_err());
    }

    #[test]
    fn numeric_derivative_quality() {
        let f = FunctionSpec::new("exp(t)");
        let v = numeric_derivative(&f, 1.0, 1, None).unwrap();
        assert!((v - 1.0f64.exp()).abs() < 1e-8);
        let f = FunctionSpec::new("t^3");
        let v = numeric_derivative(&f, 1.0, 2, None).unwrap();
        assert!((v - 6.0).abs() < 1e-6);
        // one-sided at the boundary
        let f = FunctionSpec::new("sin(t)");
        let v = numeric_derivative(&f, 0.0, 1, None).unwrap();
        assert!((v - 1.0).abs() < 1e-8);
        let v = numeric_derivative(&f, 0.0, 2, None).unwrap();
        assert!(v.abs() < 1e-6);
        // explicit step
        let f = FunctionSpec::new("t^2");
        let v = numeric_derivative(&f, 2.0, 1, Some(1e-4)).unwrap();
        assert!((v - 4.0).abs() < 1e-9);
        assert!(numeric_derivative(&f, 1.0, 3, None).is_err());
        assert!(numeric_derivative(&f, 1.0, 1, Some(-1.0)).is_err());
    }

    #[test]
    fn gl_sum_examples() {
        let o = half();
        let f = FunctionSpec::new("t");
        let v = fd_gl_sum(&f, &o, 1.0, 1e-3).unwrap();
        assert!((v - D_HALF_T).abs() < 1e-2);
        let v = fd_gl_sum(&f, &o, 1.0, 1e-4).unwrap();
        assert_relative_eq!(v, D_HALF_T, max_relative = 1e-4);
        let f = FunctionSpec::new("1");
        let v = fd_gl_sum(&f, &o, 1.0, 1e-3).unwrap();
        assert!((v - 0.564_189_583_547_756_3).abs() < 1e-2);
        let f = FunctionSpec::new("0");
        assert_eq!(fd_gl_sum(&f, &o, 1.0, 1e-3).unwrap(), 0.0);
        // first order in h, integer case degenerates to a backward difference
        let o1 = FractionalOrder::new(1.0).unwrap();
        let f = FunctionSpec::new("t^2");
        let v = fd_gl_sum(&f, &o1, 1.0, 1e-3).unwrap();
        assert!((v - 2.0).abs() < 2e-3);
        assert!(fd_gl_sum(&f, &o, 1.0, 2.0).is_err()); // h > t
        assert!(fd_gl_sum(&f, &o, 0.0, 1e-2).is_err());
    }

    #[test]
    fn gl_sum_converges_first_order() {
        let o = half();
        let f = FunctionSpec::new("t^2");
        let truth = closed_form_power(2.0, &o, DerivativeClass::RiemannLiouville, 1.0).unwrap();
        let errs: Vec<f64> = [1e-2, 5e-3, 2.5e-3]
            .iter()
            .map(|&h| (fd_gl_sum(&f, &o, 1.0, h).unwrap() - truth).abs())
            .collect();
        for pair in errs.windows(2) {
            let rate = (pair[0] / pair[1]).log2();
            assert!((rate - 1.0).abs() < 0.2, "rate = {rate}");
        }
    }

    #[test]
    fn direct_route_examples() {
        let o = half();
        let f = FunctionSpec::new("t");
        // the inner numeric derivative caps accuracy near eps * t / h ~ 1e-11
        let v = fd_caputo_direct(&f, &o, 1.0, 32).unwrap();
        assert_relative_eq!(v, D_HALF_T, max_relative = 1e-9);
        let v = fd_caputo_direct(&f, &o, 4.0, 32).unwrap();
        assert_relative_eq!(v, 2.256_758_334_191_022_5, max_relative = 1e-9);
        let f = FunctionSpec::new("t^2");
        let v = fd_caputo_direct(&f, &o, 1.0, 32).unwrap();
        assert_relative_eq!(v, D_HALF_T2, max_relative = 1e-9);
        let o15 = FractionalOrder::new(1.5).unwrap();
        let v = fd_caputo_direct(&f, &o15, 1.0, 32).unwrap();
        assert_relative_eq!(v, 2.256_758_334_191_022_5, max_relative = 1e-7);

        // constants vanish in this class
        let c = FunctionSpec::new("7");
        let v = fd_caputo_direct(&c, &o, 1.0, 32).unwrap();
        assert!(v.abs() < 1e-10, "got {v}");
        let f = FunctionSpec::new("exp(t)");
        let v = fd_caputo_direct(&f, &o, 1.0, 32).unwrap();
        // reference: exp(t) erf(sqrt(t)) at t = 1
        assert_relative_eq!(v, 2.290_698_252_303_791, max_relative = 1e-6);

        let o1 = FractionalOrder::new(1.0).unwrap();
        assert!(fd_caputo_direct(&f, &o1, 1.0, 32).is_err());
        let o25 = FractionalOrder::new(2.5).unwrap();
        assert!(fd_caputo_direct(&f, &o25, 1.0, 32).is_err());
    }

    #[test]
    fn multiplier_examples() {
        let o = half();
        let base = TransformSpec::new("1/s^2", 0.0);
        let m = laplace_multiplier(&base, &o, DerivativeClass::GrunwaldLetnikov, &[]).unwrap();
        assert_eq!(m.expression, "(s^0.5) * (1/s^2)");
        assert!(m.corrections.is_empty());
        assert_eq!(m.c0, 0.0);
        let v = laplace::transform_value_real(&m, 4.0).unwrap();
        assert_relative_eq!(v, 0.125, max_relative = 1e-14);

        let base = TransformSpec::new("1/(s+1)", -1.0);
        let m = laplace_multiplier(&base, &o, DerivativeClass::Caputo, &[1.0]).unwrap();
        assert_eq!(m.corrections, vec![(1.0, -0.5)]);
        assert_eq!(m.c0, 0.0); // raised from -1: s^a branches at the origin
        let v = laplace::transform_value_real(&m, 4.0).unwrap();
        assert_relative_eq!(v, 0.4 - 0.5, max_relative = 1e-13);

        // zero initial values make rl representable; nonzero do not
        assert!(laplace_multiplier(&base, &o, DerivativeClass::RiemannLiouville, &[0.0]).is_ok());
        assert!(matches!(
            laplace_multiplier(&base, &o, DerivativeClass::RiemannLiouville, &[1.0]),
            Err(Error::Unsupported(_))
        ));

        // existing corrections shift by the order
        let mut base = TransformSpec::new("1/s", 0.0);
        base.corrections.push((2.0, -1.0));
        let m = laplace_multiplier(&base, &o, DerivativeClass::GrunwaldLetnikov, &[]).unwrap();
        assert_eq!(m.corrections, vec![(2.0, -0.5)]);

        // integer order degenerates to the classical formula: s * 1/s^2 = 1/s
        let o1 = FractionalOrder::new(1.0).unwrap();
        let base = TransformSpec::new("1/s^2", 0.0);
        for class in [
            DerivativeClass::RiemannLiouville,
            DerivativeClass::Caputo,
            DerivativeClass::GrunwaldLetnikov,
        ] {
            let m = laplace_multiplier(&base, &o1, class, &[0.0]).unwrap();
            assert!(m.corrections.is_empty());
            let v = laplace::transform_value_real(&m, 4.0).unwrap();
            assert_relative_eq!(v, 0.25, max_relative = 1e-14);
        }
    }

    #[test]
    fn transform_shape_recognition() {
        let as_spec = |text: &str| {
            let ast = expr::parse(text, "t").unwrap();
            match_transform(&ast)
        };
        assert_eq!(as_spec("3").unwrap().expression, "3/s");
        assert_eq!(as_spec("t").unwrap().expression, "1/s^2");
        let s = as_spec("t^0.5").unwrap();
        assert!(s.expression.ends_with("/s^1.5"));
        let s = as_spec("exp(-2*t)").unwrap();
        assert_eq!(s.expression, "1/(s+2)");
        assert_eq!(s.c0, -2.0);
        assert_eq!(as_spec("sin(2*t)").unwrap().expression, "2/(s^2+4)");
        assert_eq!(as_spec("cos(t)").unwrap().expression, "s/(s^2+1)");
        let s = as_spec("-t").unwrap();
        assert_eq!(s.expression, "-(1/s^2)");
        assert!(as_spec("t*t").is_none());
        assert!(as_spec("ln(1+t)").is_none());

        // linear combinations of known shapes combine termwise
        let s = as_spec("2*t + 3*t^2").unwrap();
        let v = laplace::transform_value_real(&s, 2.0).unwrap();
        assert_relative_eq!(v, 2.0 * 0.25 + 3.0 * 0.25, max_relative = 1e-14);
        let s = as_spec("t/2 - 1").unwrap();
        let v = laplace::transform_value_real(&s, 2.0).unwrap();
        assert_relative_eq!(v, 0.5 * 0.25 - 0.5, max_relative = 1e-14);
        let s = as_spec("1 + exp(-2*t)").unwrap();
        assert_eq!(s.c0, 0.0); // pole at -2 sits left of the one at 0
        assert!(as_spec("t + ln(1+t)").is_none());
    }

    #[test]
    fn compute_grid_route() {
        let o = half();
        let f = FunctionSpec::new("t");
        let r = fd_compute(
            &f,
            None,
            &o,
            DerivativeClass::RiemannLiouville,
            FdMethod::GlSum,
            &FdParams::default(),
            1.0,
        )
        .unwrap();
        assert_relative_eq!(r.value, D_HALF_T, max_relative = 1e-4);
        assert!(r.est_error > 0.0 && (r.value - D_HALF_T).abs() <= 3.0 * r.est_error);
    }

    #[test]
    fn compute_direct_route() {
        let o = half();
        let f = FunctionSpec::new("t");
        let r = fd_compute(
            &f,
            None,
            &o,
            DerivativeClass::Caputo,
            FdMethod::Direct,
            &FdParams::default(),
            1.0,
        )
        .unwrap();
        assert_relative_eq!(r.value, D_HALF_T, max_relative = 1e-10);
    }

    #[test]
    fn compute_transform_routes() {
        let o = half();
        let f = FunctionSpec::new("t^2");
        let p = FdParams::default();
        let r = fd_compute(
            &f,
            None,
            &o,
            DerivativeClass::RiemannLiouville,
            FdMethod::Stehfest,
            &p,
            1.0,
        )
        .unwrap();
        assert_relative_eq!(r.value, D_HALF_T2, max_relative = 1e-5);

        // gl through the plain multiplier, same value for this function
        let r = fd_compute(
            &f,
            None,
            &o,
            DerivativeClass::GrunwaldLetnikov,
            FdMethod::Stehfest,
            &p,
            1.0,
        )
        .unwrap();
        assert_relative_eq!(r.value, D_HALF_T2, max_relative = 1e-5);

        // caputo with zero initial data shares the plain multiplier:
        // an empty init list means all-zero initial data
        let pz = FdParams {
            init: Some(Vec::new()),
            ..FdParams::default()
        };
        let r = fd_compute(
            &f,
            None,
            &o,
            DerivativeClass::Caputo,
            FdMethod::Stehfest,
            &pz,
            1.0,
        )
        .unwrap();
        assert!((r.value - 1.504_505_6).abs() < 1e-4);

        let p64 = FdParams {
            quad_order: 64,
            ..FdParams::default()
        };
        let r = fd_compute(
            &f,
            None,
            &o,
            DerivativeClass::RiemannLiouville,
            FdMethod::Gli,
            &p64,
            1.0,
        )
        .unwrap();
        assert_relative_eq!(r.value, D_HALF_T2, max_relative = 5e-2);
        let r = fd_compute(
            &f,
            None,
            &o,
            DerivativeClass::RiemannLiouville,
            FdMethod::Mgi,
            &p64,
            1.0,
        )
        .unwrap();
        assert_relative_eq!(r.value, D_HALF_T2, max_relative = 5e-2);
    }

    #[test]
    fn compute_caputo_of_shifted_ramp() {
        // caputo kills the constant: D^{1/2} (t + 1) = D^{1/2} t
        let o = half();
        let f = FunctionSpec::new("t + 1");
        let spec = TransformSpec::new("1/s^2 + 1/s", 0.0);
        let r = fd_compute(
            &f,
            Some(&spec),
            &o,
            DerivativeClass::Caputo,
            FdMethod::Stehfest,
            &FdParams::default(),
            1.0,
        )
        .unwrap();
        assert_relative_eq!(r.value, D_HALF_T, max_relative = 1e-4);
        // and rl adds the boundary layer back
        let r = fd_compute(
            &f,
            Some(&spec),
            &o,
            DerivativeClass::RiemannLiouville,
            FdMethod::Stehfest,
            &FdParams::default(),
            1.0,
        )
        .unwrap();
        assert_relative_eq!(r.value, 1.692_568_750_643_269, max_relative = 1e-4);
    }

    #[test]
    fn compute_is_linear() {
        let o = half();
        let p = FdParams::default();
        let rl = DerivativeClass::RiemannLiouville;
        // summing 14 coefficients of size ~1e6 leaves Stehfest ~1e-9 shy of
        // exact linearity; the positive-weight contour rules do much better
        for (method, tol) in [
            (FdMethod::GlSum, 5e-10),
            (FdMethod::Direct, 5e-10),
            (FdMethod::Stehfest, 1e-8),
            (FdMethod::Gli, 1e-12),
            (FdMethod::Mgi, 1e-12),
        ] {
            let class = if method == FdMethod::Direct {
                DerivativeClass::Caputo
            } else {
                rl
            };
            let run = |text: &str| {
                fd_compute(&FunctionSpec::new(text), None, &o, class, method, &p, 1.0)
                    .unwrap()
                    .value
            };
            let combo = run("2*t + 3*t^2");
            let a = run("t");
            let b = run("t^2");
            assert_relative_eq!(combo, 2.0 * a + 3.0 * b, max_relative = tol);
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(12))]
        #[test]
        fn linearity_over_random_coefficients(a in -5.0f64..5.0, b in -5.0f64..5.0) {
            let o = half();
            let p = FdParams::default();
            for (method, class) in [
                (FdMethod::GlSum, DerivativeClass::RiemannLiouville),
                (FdMethod::Direct, DerivativeClass::Caputo),
            ] {
                let run = |text: &str| {
                    fd_compute(&FunctionSpec::new(text), None, &o, class, method, &p, 1.0)
                        .unwrap()
                        .value
                };
                let combo = run(&format!("{a}*t + {b}*t^2"));
                let fa = run("t");
                let fb = run("t^2");
                let want = a * fa + b * fb;
                let scale = (a * fa).abs().max((b * fb).abs()).max(1.0);
                proptest::prop_assert!(
                    (combo - want).abs() <= 5e-10 * scale,
                    "method {method:?}: {combo} vs {want}"
                );
            }
        }
    }

    #[test]
    fn integer_orders_recover_classical_derivatives() {
        let p = FdParams {
            h: 1e-5,
            ..FdParams::default()
        };
        let rl = DerivativeClass::RiemannLiouville;
        let o1 = FractionalOrder::new(1.0).unwrap();
        let r = fd_compute(
            &FunctionSpec::new("t^2"),
            None,
            &o1,
            rl,
            FdMethod::GlSum,
            &p,
            1.0,
        )
        .unwrap();
        assert!((r.value - 2.0).abs() < 1e-4);
        let o2 = FractionalOrder::new(2.0).unwrap();
        let r = fd_compute(
            &FunctionSpec::new("t^3"),
            None,
            &o2,
            rl,
            FdMethod::GlSum,
            &p,
            1.0,
        )
        .unwrap();
        assert!((r.value - 6.0).abs() < 1e-3);
    }

    #[test]
    fn classes_agree_when_boundary_values_vanish() {
        // t^{3/2} has f(0) = 0, so all three classes coincide
        let o = half();
        let f = FunctionSpec::new("t^1.5");
        let p = FdParams::default();
        for t in [0.5, 1.0, 2.0] {
            let truth = closed_form_power(1.5, &o, DerivativeClass::RiemannLiouville, t).unwrap();
            let vals: Vec<f64> = [
                DerivativeClass::RiemannLiouville,
                DerivativeClass::Caputo,
                DerivativeClass::GrunwaldLetnikov,
            ]
            .iter()
            .map(|&class| {
                let r = fd_compute(&f, None, &o, class, FdMethod::GlSum, &p, t).unwrap();
                assert_relative_eq!(r.value, truth, max_relative = 1e-3);
                r.value
            })
            .collect();
            for v in &vals[1..] {
                assert_relative_eq!(*v, vals[0], max_relative = 1e-3);
            }
        }
        // f''' ~ u^{-1.5} near 0 degrades the inner difference stencil there
        let truth = closed_form_power(1.5, &o, DerivativeClass::RiemannLiouville, 1.0).unwrap();
        let r = fd_compute(
            &f,
            None,
            &o,
            DerivativeClass::Caputo,
            FdMethod::Direct,
            &p,
            1.0,
        )
        .unwrap();
        assert_relative_eq!(r.value, truth, max_relative = 1e-5);
    }

    #[test]
    fn composition_of_orders_adds() {
        // D^{0.3} D^{0.4} t^3 = D^{0.7} t^3 in the rl sense, via closed forms
        let o4 = FractionalOrder::new(0.4).unwrap();
        let o3 = FractionalOrder::new(0.3).unwrap();
        let o7 = FractionalOrder::new(0.7).unwrap();
        let rl = DerivativeClass::RiemannLiouville;
        let t = 1.3;
        let inner_coeff = closed_form_power(3.0, &o4, rl, 1.0).unwrap(); // c * t^{2.6} at t=1
        let outer = inner_coeff * closed_form_power(2.6, &o3, rl, t).unwrap();
        let direct = closed_form_power(3.0, &o7, rl, t).unwrap();
        assert_relative_eq!(outer, direct, max_relative = 1e-13);

        // numeric spot check of the same identity on the grid route
        let f = FunctionSpec::new(format!("{inner_coeff} * t^2.6"));
        let v = fd_gl_sum(&f, &o3, 1.0, 1e-4).unwrap();
        let truth = closed_form_power(3.0, &o7, rl, 1.0).unwrap();
        assert_relative_eq!(v, truth, max_relative = 1e-3);
    }

    #[test]
    fn unknown_shape_without_transform_is_refused() {
        let o = half();
        let err = fd_compute(
            &FunctionSpec::new("ln(1+t)"),
            None,
            &o,
            DerivativeClass::GrunwaldLetnikov,
            FdMethod::Stehfest,
            &FdParams::default(),
            1.0,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn compute_validates_time() {
        let o = half();
        let f = FunctionSpec::new("t");
        for t in [0.0, -1.0, f64::NAN] {
            assert!(fd_compute(
                &f,
                None,
                &o,
                DerivativeClass::RiemannLiouville,
                FdMethod::GlSum,
                &FdParams::default(),
                t
            )
            .is_err());
        }
    }
}
