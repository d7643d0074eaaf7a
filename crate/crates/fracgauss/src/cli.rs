//! Command-line front end.
//!
//! Five subcommands: `rule` prints quadrature nodes and weights, `invlap`
//! inverts a Laplace transform on a time grid, `deriv` evaluates a
//! fractional derivative, `compare` runs every applicable method side by
//! side, and `pairs` lists the builtin transform pairs. Output is CSV
//! (9 fixed decimals) or JSON; `--verbose` adds `#`-prefixed notes, which go
//! to stdout for CSV but to stderr for JSON so the payload stays parseable.
//! Exit codes: 0 success, 2 bad input (parse or argument errors), 3 runtime
//! failures (contour violations, overflow, non-finite results, ...).

use std::io::Write;
use std::str::FromStr;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fracderiv::{self, DerivativeClass, FdMethod, FdParams, FractionalOrder, FunctionSpec};
use crate::laplace::{self, InversionConfig, InversionMethod, TransformPair, TransformSpec};
use crate::quadrature::{self, RuleKind};
use crate::specfun;

#[derive(Parser)]
#[command(
    name = "fracgauss",
    version,
    about = "Fractional derivatives and Laplace inversion via Gauss quadrature"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the nodes and weights of a Gauss rule
    Rule(RuleArgs),
    /// Invert a Laplace transform F(s) numerically
    Invlap(InvlapArgs),
    /// Evaluate a fractional derivative of f(t)
    Deriv(DerivArgs),
    /// Run all applicable derivative methods side by side
    Compare(CompareArgs),
    /// List the builtin function/transform pairs
    Pairs(PairsArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Emit run notes prefixed with '#'
    #[arg(long)]
    verbose: bool,
}

#[derive(Args)]
struct RuleArgs {
    /// Rule family: laguerre, mgi, or legendre
    #[arg(long)]
    kind: String,
    /// Rule order (number of nodes)
    #[arg(long)]
    n: usize,
    /// Weight exponent for laguerre/mgi (defaults: 0 and 0.5)
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["transform", "pair"])))]
struct InvlapArgs {
    /// Transform expression in s
    #[arg(long)]
    transform: Option<String>,
    /// Builtin pair, as "name" or "name:param"
    #[arg(long)]
    pair: Option<String>,
    /// Abscissa of convergence of --transform (default 0)
    #[arg(long, requires = "transform", allow_hyphen_values = true)]
    c: Option<f64>,
    /// Evaluation times: comma list, entries may be ranges a:b:step
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    /// Inversion method: stehfest, gli, or mgi
    #[arg(long, default_value = "stehfest")]
    method: String,
    /// Term count: Stehfest N (even, 2..=18, default 14) or quadrature
    /// order for gli/mgi (default 32)
    #[arg(long)]
    n: Option<usize>,
    /// Weight exponent for mgi (default 0.5)
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["f", "pair"])))]
struct DerivArgs {
    /// Function expression in t
    #[arg(long)]
    f: Option<String>,
    /// Builtin pair, as "name" or "name:param"
    #[arg(long)]
    pair: Option<String>,
    /// Laplace transform of f (needed by transform methods when the
    /// function's shape is not recognized)
    #[arg(long)]
    transform: Option<String>,
    /// Abscissa of convergence for --transform (default 0)
    #[arg(long, requires = "transform", allow_hyphen_values = true)]
    c: Option<f64>,
    /// Differentiation order (> 0)
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    /// Derivative class: rl, caputo, or gl
    #[arg(long, default_value = "rl")]
    class: String,
    /// Method: glsum, direct, stehfest, gli, or mgi
    #[arg(long, default_value = "glsum")]
    method: String,
    /// Evaluation times: comma list, entries may be ranges a:b:step
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    /// Grid step for glsum
    #[arg(long, default_value_t = 1e-4)]
    h: f64,
    /// Term count for the chosen method: Stehfest N (even, 2..=18,
    /// default 14) or rule order for gli/mgi/direct (default 32)
    #[arg(long)]
    n: Option<usize>,
    /// Initial values f(0),f'(0),... as a comma list (estimated numerically
    /// when omitted)
    #[arg(long, allow_hyphen_values = true)]
    init: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["f", "pair"])))]
struct CompareArgs {
    /// Function expression in t
    #[arg(long)]
    f: Option<String>,
    /// Builtin pair, as "name" or "name:param"
    #[arg(long)]
    pair: Option<String>,
    /// Laplace transform of f
    #[arg(long)]
    transform: Option<String>,
    /// Abscissa of convergence for --transform (default 0)
    #[arg(long, requires = "transform", allow_hyphen_values = true)]
    c: Option<f64>,
    /// Differentiation order (> 0)
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    /// Derivative class: rl, caputo, or gl
    #[arg(long, default_value = "rl")]
    class: String,
    /// Evaluation times: comma list, entries may be ranges a:b:step
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    /// Grid step for glsum
    #[arg(long, default_value_t = 1e-4)]
    h: f64,
    /// Quadrature order for gli/mgi and the Legendre order for direct
    #[arg(long, default_value_t = 32)]
    n: usize,
    /// Stehfest term count (even, 2..=18)
    #[arg(long = "N", default_value_t = 14)]
    terms: usize,
    /// Initial values f(0),f'(0),... as a comma list
    #[arg(long, allow_hyphen_values = true)]
    init: Option<String>,
    /// Deviation column reference: "power:P" for the power-law closed form
    /// of t^P, or "pair" to use the closed form of --pair
    #[arg(long)]
    oracle: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PairsArgs {
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Serialize)]
struct OutputRow {
    t: f64,
    value: f64,
    est_error: f64,
    method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    class: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    deviation: Option<f64>,
}

#[derive(Serialize)]
struct RuleRow {
    index: usize,
    node: f64,
    weight: f64,
}

#[derive(Serialize)]
struct PairRow {
    name: String,
    function: String,
    transform: String,
    c0: f64,
}

/// Rendered output, fully built before anything is written.
struct Rendered {
    out: String,
    notes: Vec<String>,
}

impl Rendered {
    fn new() -> Self {
        Rendered {
            out: String::new(),
            notes: Vec::new(),
        }
    }
}

/// Parse "0.5,1,2" or "0.5,1:3:0.5" into a time grid. Ranges are inclusive
/// with a small guard against floating-point shortfall at the upper end.
fn parse_times(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(Error::InvalidArgument("empty entry in --t".into()));
        }
        let parts: Vec<&str> = item.split(':').collect();
        match parts.len() {
            1 => out.push(parse_time_number(parts[0])?),
            3 => {
                let a = parse_time_number(parts[0])?;
                let b = parse_time_number(parts[1])?;
                let step = parse_time_number(parts[2])?;
                if !(step > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "range step in --t must be positive, got {step}"
                    )));
                }
                if b < a {
                    return Err(Error::InvalidArgument(format!(
                        "range start {a} exceeds end {b} in --t"
                    )));
                }
                let mut i = 0u64;
                loop {
                    let x = a + i as f64 * step;
                    if x > b + 1e-9 * step {
                        break;
                    }
                    out.push(x);
                    i += 1;
                }
            }
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "range entry '{item}' in --t must have the form start:end:step"
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument("--t produced no times".into()));
    }
    Ok(out)
}

fn parse_time_number(text: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidArgument(format!("invalid value '{text}' in --t")))
}

fn positive_times(text: &str) -> Result<Vec<f64>> {
    let times = parse_times(text)?;
    if let Some(bad) = times.iter().find(|t| !(**t > 0.0) || !t.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "values for --t must be positive and finite, got {bad}"
        )));
    }
    Ok(times)
}

fn parse_init(text: &Option<String>) -> Result<Option<Vec<f64>>> {
    let Some(text) = text else { return Ok(None) };
    let mut out = Vec::new();
    for item in text.split(',') {
        let v: f64 = item
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("invalid value '{item}' in --init")))?;
        out.push(v);
    }
    Ok(Some(out))
}

fn fixed(x: f64) -> String {
    format!("{x:.9}")
}

fn render_output_rows(
    rows: &[OutputRow],
    with_class: bool,
    with_deviation: bool,
    format: OutputFormat,
) -> Result<String> {
    match format {
        OutputFormat::Json => to_json(rows),
        OutputFormat::Csv => {
            let mut s = String::from("t,value,est_error,method");
            if with_class {
                s.push_str(",class");
            }
            if with_deviation {
                s.push_str(",deviation");
            }
            s.push('\n');
            for r in rows {
                s.push_str(&format!(
                    "{},{},{},{}",
                    fixed(r.t),
                    fixed(r.value),
                    fixed(r.est_error),
                    r.method
                ));
                if let Some(c) = &r.class {
                    s.push_str(&format!(",{c}"));
                }
                if let Some(d) = r.deviation {
                    s.push_str(&format!(",{}", fixed(d)));
                }
                s.push('\n');
            }
            Ok(s)
        }
    }
}

fn to_json<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(rows)
        .map_err(|e| Error::InvalidArgument(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn run_rule(args: &RuleArgs) -> Result<Rendered> {
    let kind = RuleKind::from_str(&args.kind)?;
    let gamma = match (kind, args.gamma) {
        (RuleKind::Legendre, Some(_)) => {
            return Err(Error::InvalidArgument(
                "--gamma does not apply to legendre rules".into(),
            ))
        }
        (RuleKind::Legendre, None) => 0.0,
        (RuleKind::Mgi, None) => 0.5,
        (_, g) => g.unwrap_or(0.0),
    };
    let rule = quadrature::make_rule(kind, args.n, gamma)?;
    let mut r = Rendered::new();
    if args.output.verbose {
        r.notes.push(format!(
            "# kind={} n={} gamma={gamma}",
            kind.as_str(),
            args.n
        ));
        let sum: f64 = rule.weights.iter().sum();
        r.notes.push(format!("# weight-sum={sum:.15e}"));
        r.notes.push(format!(
            "# exactness-degree(1e-8)={}",
            quadrature::exactness_degree(&rule, 1e-8)?
        ));
    }
    let rows: Vec<RuleRow> = rule
        .nodes
        .iter()
        .zip(rule.weights.iter())
        .enumerate()
        .map(|(index, (n, w))| RuleRow {
            index,
            node: *n,
            weight: *w,
        })
        .collect();
    r.out = match args.output.format {
        OutputFormat::Json => to_json(&rows)?,
        OutputFormat::Csv => {
            let mut s = String::from("index,node,weight\n");
            for row in &rows {
                s.push_str(&format!(
                    "{},{},{}\n",
                    row.index,
                    fixed(row.node),
                    fixed(row.weight)
                ));
            }
            s
        }
    };
    Ok(r)
}

fn run_invlap(args: &InvlapArgs) -> Result<Rendered> {
    let method = InversionMethod::from_str(&args.method)?;
    if args.gamma.is_some() && method != InversionMethod::Mgi {
        return Err(Error::InvalidArgument(
            "--gamma only applies to --method mgi".into(),
        ));
    }
    let spec = match (&args.transform, &args.pair) {
        (Some(expr), _) => TransformSpec::new(expr.clone(), args.c.unwrap_or(0.0)),
        (None, Some(name)) => laplace::lookup_pair(name)?.transform,
        (None, None) => unreachable!("clap enforces the source group"),
    };
    // one --n flag: Stehfest reads it as its term count, the contour
    // rules as their quadrature order
    let config = InversionConfig {
        method,
        order: args.n.unwrap_or(32),
        stehfest_n: if method == InversionMethod::Stehfest {
            args.n.unwrap_or(14)
        } else {
            14
        },
        gamma_param: args.gamma.unwrap_or(0.5),
    };
    config.validate()?;
    let times = positive_times(&args.t)?;
    let mut rows = Vec::with_capacity(times.len());
    for &t in &times {
        let (value, est_error) = laplace::invert_with_estimate(&spec, t, &config)?;
        rows.push(OutputRow {
            t,
            value,
            est_error,
            method: method.as_str().to_string(),
            class: None,
            deviation: None,
        });
    }
    let mut r = Rendered::new();
    if args.output.verbose {
        r.notes.push(format!("# transform={}", spec.expression));
        r.notes.push(format!("# c0={}", spec.c0));
        match method {
            InversionMethod::Stehfest => r
                .notes
                .push(format!("# method=stehfest N={}", config.stehfest_n)),
            InversionMethod::Gli => r
                .notes
                .push(format!("# method=gli n={} contour=c0+1", config.order)),
            InversionMethod::Mgi => r.notes.push(format!(
                "# method=mgi n={} gamma={} contour=c0+1",
                config.order, config.gamma_param
            )),
        }
    }
    r.out = render_output_rows(&rows, false, false, args.output.format)?;
    Ok(r)
}

struct DerivProblem {
    f: FunctionSpec,
    transform: Option<TransformSpec>,
    pair: Option<TransformPair>,
    order: FractionalOrder,
    class: DerivativeClass,
    params: FdParams,
    times: Vec<f64>,
}

#[allow(clippy::too_many_arguments)]
fn build_problem(
    f: &Option<String>,
    pair: &Option<String>,
    transform: &Option<String>,
    c0: Option<f64>,
    alpha: f64,
    class: &str,
    t: &str,
    h: f64,
    n: usize,
    terms: usize,
    init: &Option<String>,
) -> Result<DerivProblem> {
    let looked_up = pair.as_ref().map(|p| laplace::lookup_pair(p)).transpose()?;
    let function = match (&looked_up, f) {
        (Some(p), _) => FunctionSpec::new(p.function_text.clone()),
        (None, Some(expr)) => FunctionSpec::new(expr.clone()),
        (None, None) => unreachable!("clap enforces the source group"),
    };
    let transform_spec = match transform {
        Some(expr) => Some(TransformSpec::new(expr.clone(), c0.unwrap_or(0.0))),
        None => looked_up.as_ref().map(|p| p.transform.clone()),
    };
    let order = FractionalOrder::new(alpha)?;
    let class = DerivativeClass::from_str(class)?;
    let params = FdParams {
        h,
        quad_order: n,
        stehfest_n: terms,
        init: parse_init(init)?,
    };
    if !(params.h > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "--h must be positive, got {h}"
        )));
    }
    Ok(DerivProblem {
        f: function,
        transform: transform_spec,
        pair: looked_up,
        order,
        class,
        params,
        times: positive_times(t)?,
    })
}

fn run_deriv(args: &DerivArgs) -> Result<Rendered> {
    let method = FdMethod::from_str(&args.method)?;
    // one --n flag: Stehfest reads it as its term count, the quadrature
    // routes as their rule order
    let (order_n, terms) = if method == FdMethod::Stehfest {
        (32, args.n.unwrap_or(14))
    } else {
        (args.n.unwrap_or(32), 14)
    };
    let p = build_problem(
        &args.f,
        &args.pair,
        &args.transform,
        args.c,
        args.alpha,
        &args.class,
        &args.t,
        args.h,
        order_n,
        terms,
        &args.init,
    )?;
    let mut rows = Vec::with_capacity(p.times.len());
    for &t in &p.times {
        let v = fracderiv::fd_compute(
            &p.f,
            p.transform.as_ref(),
            &p.order,
            p.class,
            method,
            &p.params,
            t,
        )?;
        rows.push(OutputRow {
            t,
            value: v.value,
            est_error: v.est_error,
            method: method.as_str().to_string(),
            class: Some(p.class.as_str().to_string()),
            deviation: None,
        });
    }
    let mut r = Rendered::new();
    if args.output.verbose {
        r.notes.push(format!("# f={}", p.f.expression));
        r.notes.push(format!(
            "# transform={}",
            p.transform
                .as_ref()
                .map(|s| s.expression.clone())
                .unwrap_or_else(|| "(matched from shape or unused)".into())
        ));
        r.notes.push(format!(
            "# alpha={} class={} method={}",
            p.order.alpha,
            p.class.as_str(),
            method.as_str()
        ));
    }
    r.out = render_output_rows(&rows, true, false, args.output.format)?;
    Ok(r)
}

/// Exact derivatives of a builtin pair's function at t = 0, for the Caputo
/// boundary layer of the closed-form reference.
fn pair_init(pair: &TransformPair, n: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let v = match pair.name.as_str() {
            "one" => {
                if k == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            "t" => {
                if k == 1 {
                    1.0
                } else {
                    0.0
                }
            }
            "power" => {
                let p = pair.param.unwrap_or(0.5);
                let r = p.round();
                if r >= 0.0 && (p - r).abs() <= specfun::INTEGER_TOL {
                    let pi = r as usize;
                    if k == pi {
                        specfun::gamma(p + 1.0)?
                    } else {
                        0.0
                    }
                } else if (k as f64) < p {
                    0.0
                } else {
                    return Err(Error::InvalidArgument(format!(
                        "t^{p} has no finite derivative of order {k} at 0; \
                         no closed-form caputo reference"
                    )));
                }
            }
            "exp" => {
                let a = pair.param.unwrap_or(1.0);
                (-a).powi(k as i32)
            }
            "sin" => {
                let w = pair.param.unwrap_or(1.0);
                match k % 4 {
                    1 => w.powi(k as i32),
                    3 => -w.powi(k as i32),
                    _ => 0.0,
                }
            }
            "cos" => {
                let w = pair.param.unwrap_or(1.0);
                match k % 4 {
                    0 => w.powi(k as i32),
                    2 => -w.powi(k as i32),
                    _ => 0.0,
                }
            }
            other => {
                return Err(Error::InvalidArgument(format!(
                    "no closed-form reference for pair '{other}'"
                )))
            }
        };
        out.push(v);
    }
    Ok(out)
}

/// Closed-form derivative of a builtin pair: power laws directly, the
/// others through termwise differentiation of their power series, which
/// lands on Mittag-Leffler functions with real arguments.
fn pair_oracle(
    pair: &TransformPair,
    order: &FractionalOrder,
    class: DerivativeClass,
    t: f64,
) -> Result<f64> {
    let a = order.alpha;
    let rl = DerivativeClass::RiemannLiouville;
    let rl_value = match pair.name.as_str() {
        "one" => fracderiv::closed_form_power(0.0, order, rl, t)?,
        "t" => fracderiv::closed_form_power(1.0, order, rl, t)?,
        "power" => fracderiv::closed_form_power(pair.param.unwrap_or(0.5), order, rl, t)?,
        "exp" => {
            let lam = -pair.param.unwrap_or(1.0);
            t.powf(-a) * specfun::mittag_leffler(1.0, 1.0 - a, lam * t)?
        }
        "sin" => {
            let w = pair.param.unwrap_or(1.0);
            let z = -(w * t) * (w * t);
            w * t.powf(1.0 - a) * specfun::mittag_leffler(2.0, 2.0 - a, z)?
        }
        "cos" => {
            let w = pair.param.unwrap_or(1.0);
            let z = -(w * t) * (w * t);
            t.powf(-a) * specfun::mittag_leffler(2.0, 1.0 - a, z)?
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "no closed-form reference for pair '{other}'"
            )))
        }
    };
    match class {
        DerivativeClass::Caputo => {
            let init = pair_init(pair, order.n_ceil)?;
            // the layer alone is rl_from_caputo applied to zero
            let layer = fracderiv::rl_from_caputo(0.0, &init, order, t)?;
            Ok(rl_value - layer)
        }
        _ => Ok(rl_value),
    }
}

/// Reference for the compare deviation column: the closed-form power law
/// D of t^P, or the closed form attached to a builtin pair.
enum OracleKind {
    Power(f64),
    Pair,
}

fn parse_oracle(text: &str) -> Result<OracleKind> {
    if text == "pair" {
        return Ok(OracleKind::Pair);
    }
    if let Some(rest) = text.strip_prefix("power:") {
        let p: f64 = rest.trim().parse().map_err(|_| {
            Error::InvalidArgument(format!("invalid exponent '{rest}' in --oracle"))
        })?;
        return Ok(OracleKind::Power(p));
    }
    Err(Error::InvalidArgument(format!(
        "--oracle must be 'power:P' or 'pair', got '{text}'"
    )))
}

fn run_compare(args: &CompareArgs) -> Result<Rendered> {
    let p = build_problem(
        &args.f,
        &args.pair,
        &args.transform,
        args.c,
        args.alpha,
        &args.class,
        &args.t,
        args.h,
        args.n,
        args.terms,
        &args.init,
    )?;
    let oracle = args.oracle.as_deref().map(parse_oracle).transpose()?;
    if matches!(oracle, Some(OracleKind::Pair)) && p.pair.is_none() {
        return Err(Error::InvalidArgument(
            "--oracle pair needs --pair (the reference comes from its closed form)".into(),
        ));
    }
    let methods = [
        FdMethod::GlSum,
        FdMethod::Direct,
        FdMethod::Stehfest,
        FdMethod::Gli,
        FdMethod::Mgi,
    ];
    let mut r = Rendered::new();
    if args.output.verbose {
        r.notes.push(format!("# f={}", p.f.expression));
        r.notes.push(format!(
            "# alpha={} class={}",
            p.order.alpha,
            p.class.as_str()
        ));
    }
    let mut rows = Vec::new();
    for method in methods {
        for &t in &p.times {
            match fracderiv::fd_compute(
                &p.f,
                p.transform.as_ref(),
                &p.order,
                p.class,
                method,
                &p.params,
                t,
            ) {
                Ok(v) => {
                    let deviation = match &oracle {
                        Some(OracleKind::Power(pw)) => {
                            let truth = fracderiv::closed_form_power(*pw, &p.order, p.class, t)?;
                            Some((v.value - truth).abs())
                        }
                        Some(OracleKind::Pair) => {
                            let truth =
                                pair_oracle(p.pair.as_ref().unwrap(), &p.order, p.class, t)?;
                            Some((v.value - truth).abs())
                        }
                        None => None,
                    };
                    rows.push(OutputRow {
                        t,
                        value: v.value,
                        est_error: v.est_error,
                        method: method.as_str().to_string(),
                        class: Some(p.class.as_str().to_string()),
                        deviation,
                    });
                }
                Err(e) => {
                    r.notes
                        .push(format!("# skipped {} at t={t}: {e}", method.as_str()));
                }
            }
        }
    }
    r.out = render_output_rows(&rows, true, oracle.is_some(), args.output.format)?;
    Ok(r)
}

fn run_pairs(args: &PairsArgs) -> Result<Rendered> {
    let rows: Vec<PairRow> = laplace::builtin_pairs()
        .into_iter()
        .map(|p| PairRow {
            name: match p.param {
                Some(v) => format!("{}:{v}", p.name),
                None => p.name,
            },
            function: p.function_text,
            transform: p.transform.expression,
            c0: p.transform.c0,
        })
        .collect();
    let mut r = Rendered::new();
    if args.output.verbose {
        r.notes.push(format!("# {} builtin pairs", rows.len()));
    }
    r.out = match args.output.format {
        OutputFormat::Json => to_json(&rows)?,
        OutputFormat::Csv => {
            let mut s = String::from("name,function,transform,c0\n");
            for row in &rows {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    row.name,
                    row.function,
                    row.transform,
                    fixed(row.c0)
                ));
            }
            s
        }
    };
    Ok(r)
}

/// Entry point used by both the binary and the tests. Renders everything
/// before writing, so failures never leave partial tables behind.
pub fn run<W: Write, E: Write>(argv: &[String], out: &mut W, err: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{rendered}");
                0
            } else {
                let _ = write!(err, "{rendered}");
                2
            };
        }
    };
    let (result, format) = match &cli.command {
        Command::Rule(a) => (run_rule(a), a.output.format),
        Command::Invlap(a) => (run_invlap(a), a.output.format),
        Command::Deriv(a) => (run_deriv(a), a.output.format),
        Command::Compare(a) => (run_compare(a), a.output.format),
        Command::Pairs(a) => (run_pairs(a), a.output.format),
    };
    match result {
        Ok(r) => {
            // notes go to stdout for CSV but must not pollute JSON
            let notes = r.notes.iter().map(|n| format!("{n}\n")).collect::<String>();
            match format {
                OutputFormat::Csv => {
                    let _ = write!(out, "{notes}{}", r.out);
                }
                OutputFormat::Json => {
                    let _ = write!(err, "{notes}");
                    let _ = write!(out, "{}", r.out);
                }
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
