//! Regenerates the measured-accuracy tables quoted in the README.
//!
//! Run with `cargo run --release --example accuracy_table`. Prints relative
//! errors of each inversion method against the closed form of every builtin
//! pair, the same for the fractional-derivative routes, and the size of the
//! first quadrature-exactness violation at order 16.

use fracgauss::fracderiv::{
    closed_form_power, fd_compute, DerivativeClass, FdMethod, FdParams, FractionalOrder,
    FunctionSpec,
};
use fracgauss::laplace::{self, InversionConfig, InversionMethod};
use fracgauss::quadrature::{self, RuleKind};

fn rel(err: f64, truth: f64) -> f64 {
    (err - truth).abs() / truth.abs().max(f64::MIN_POSITIVE)
}

fn main() {
    let times = [0.5, 1.0, 2.0];
    let pairs = ["one", "t", "exp:1", "power:0.5"];
    let exact = |name: &str, t: f64| -> f64 {
        match name {
            "one" => 1.0,
            "t" => t,
            "exp:1" => (-t).exp(),
            "power:0.5" => t.sqrt(),
            _ => unreachable!(),
        }
    };

    println!("== inversion of builtin pairs: relative error ==");
    println!(
        "{:<12} {:>5} {:>12} {:>12} {:>12}",
        "pair", "t", "stehfest14", "gli64", "mgi64"
    );
    for name in pairs {
        let pair = laplace::lookup_pair(name).unwrap();
        for &t in &times {
            let mut cols = Vec::new();
            for (method, order) in [
                (InversionMethod::Stehfest, 64),
                (InversionMethod::Gli, 64),
                (InversionMethod::Mgi, 64),
            ] {
                let config = InversionConfig {
                    method,
                    order,
                    stehfest_n: 14,
                    gamma_param: 0.5,
                };
                let v = laplace::invert(&pair.transform, t, &config).unwrap();
                cols.push(rel(v, exact(name, t)));
            }
            println!(
                "{:<12} {:>5} {:>12.3e} {:>12.3e} {:>12.3e}",
                name, t, cols[0], cols[1], cols[2]
            );
        }
    }

    println!();
    println!("== half-derivative routes vs closed form (alpha = 0.5, rl) ==");
    println!(
        "{:<6} {:>5} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "f", "t", "glsum", "direct", "stehfest", "gli", "mgi"
    );
    let order = FractionalOrder::new(0.5).unwrap();
    for (text, p) in [("t", 1.0), ("t^2", 2.0)] {
        let f = FunctionSpec::new(text);
        for &t in &times {
            let truth = closed_form_power(p, &order, DerivativeClass::RiemannLiouville, t).unwrap();
            let mut cols = Vec::new();
            for method in [
                FdMethod::GlSum,
                FdMethod::Direct,
                FdMethod::Stehfest,
                FdMethod::Gli,
                FdMethod::Mgi,
            ] {
                let mut params = FdParams::default();
                if matches!(method, FdMethod::Gli | FdMethod::Mgi) {
                    params.quad_order = 64;
                }
                let r = fd_compute(
                    &f,
                    None,
                    &order,
                    DerivativeClass::RiemannLiouville,
                    method,
                    &params,
                    t,
                )
                .unwrap();
                cols.push(rel(r.value, truth));
            }
            println!(
                "{:<6} {:>5} {:>12.3e} {:>12.3e} {:>12.3e} {:>12.3e} {:>12.3e}",
                text, t, cols[0], cols[1], cols[2], cols[3], cols[4]
            );
        }
    }

    println!();
    println!("== first exactness violation past degree 2n-1, n = 16, tol scale ==");
    println!(
        "{:<10} {:>6} {:>10} {:>14}",
        "kind", "gamma", "degree", "deg-32 ratio"
    );
    for (kind, gammas) in [
        (RuleKind::Laguerre, &[0.0, 0.25, 0.5, 0.9][..]),
        (RuleKind::Mgi, &[0.0, 0.25, 0.5, 0.9][..]),
        (RuleKind::Legendre, &[0.0][..]),
    ] {
        for &g in gammas {
            let rule = quadrature::make_rule(kind, 16, g).unwrap();
            let degree = quadrature::exactness_degree(&rule, 1e-8).unwrap();
            // recompute the scaled deviation of the degree-32 monomial the
            // same way exactness_degree does
            let j = 32;
            let quad = quadrature::integrate(&rule, |x| x.powi(j)).unwrap();
            let exact_j = match kind {
                RuleKind::Legendre => {
                    if j % 2 == 0 {
                        2.0 / (j as f64 + 1.0)
                    } else {
                        0.0
                    }
                }
                _ => fracgauss::specfun::gamma(g + j as f64 + 1.0).unwrap(),
            };
            let mag = quadrature::integrate(&rule, |x| x.powi(j).abs()).unwrap();
            let ratio = (quad - exact_j).abs() / exact_j.abs().max(mag);
            println!(
                "{:<10} {:>6} {:>10} {:>14.3e}",
                kind.as_str(),
                g,
                degree,
                ratio
            );
        }
    }
}
