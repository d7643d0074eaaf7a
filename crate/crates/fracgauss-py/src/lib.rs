//! Python bindings: a thin layer over the fracgauss crate exposing the
//! special functions, quadrature rules, Laplace inversion, and fractional
//! derivatives. All library errors surface as ValueError with the original
//! message.

use std::str::FromStr;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use fracgauss::error::Error;
use fracgauss::fracderiv::{
    self, DerivativeClass, FdMethod, FdParams, FractionalOrder, FunctionSpec,
};
use fracgauss::laplace::{self, InversionConfig, InversionMethod, TransformSpec};
use fracgauss::quadrature::{self, QuadratureRule, RuleKind};
use fracgauss::{expr, specfun};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyfunction]
fn gamma(x: f64) -> PyResult<f64> {
    specfun::gamma(x).map_err(py_err)
}

#[pyfunction]
fn ln_gamma(x: f64) -> PyResult<f64> {
    specfun::ln_gamma(x).map_err(py_err)
}

#[pyfunction]
fn recip_gamma(x: f64) -> f64 {
    specfun::recip_gamma(x)
}

#[pyfunction]
fn mittag_leffler(alpha: f64, beta: f64, z: f64) -> PyResult<f64> {
    specfun::mittag_leffler(alpha, beta, z).map_err(py_err)
}

#[pyfunction]
fn gl_weights(alpha: f64, count: usize) -> PyResult<Vec<f64>> {
    specfun::gl_weights(alpha, count).map_err(py_err)
}

#[pyfunction]
fn stehfest_coefficients(n: usize) -> PyResult<Vec<f64>> {
    laplace::stehfest_coefficients(n).map_err(py_err)
}

/// Evaluate an expression in one variable ("t" or "s") at a real point.
#[pyfunction]
fn eval_expr(text: &str, var: &str, value: f64) -> PyResult<f64> {
    let ast = expr::parse(text, var).map_err(py_err)?;
    expr::eval_real(&ast, value).map_err(py_err)
}

/// Invert F(s) at time t; returns (value, est_error).
#[pyfunction]
#[pyo3(signature = (expression, t, *, c0 = 0.0, method = "stehfest", order = 32, terms = 14, gamma = 0.5))]
#[allow(clippy::too_many_arguments)]
fn invert_laplace(
    expression: &str,
    t: f64,
    c0: f64,
    method: &str,
    order: usize,
    terms: usize,
    gamma: f64,
) -> PyResult<(f64, f64)> {
    let spec = TransformSpec::new(expression, c0);
    let config = InversionConfig {
        method: InversionMethod::from_str(method).map_err(py_err)?,
        order,
        stehfest_n: terms,
        gamma_param: gamma,
    };
    laplace::invert_with_estimate(&spec, t, &config).map_err(py_err)
}

/// Fractional derivative of an expression in t; returns (value, est_error).
#[pyfunction]
#[pyo3(signature = (expression, alpha, t, *, class_ = "rl", method = "glsum",
                    transform = None, c0 = 0.0, h = 1e-4, order = 32, terms = 14,
                    init = None))]
#[allow(clippy::too_many_arguments)]
fn fractional_derivative(
    expression: &str,
    alpha: f64,
    t: f64,
    class_: &str,
    method: &str,
    transform: Option<&str>,
    c0: f64,
    h: f64,
    order: usize,
    terms: usize,
    init: Option<Vec<f64>>,
) -> PyResult<(f64, f64)> {
    let f = FunctionSpec::new(expression);
    let spec = transform.map(|e| TransformSpec::new(e, c0));
    let fd_order = FractionalOrder::new(alpha).map_err(py_err)?;
    let params = FdParams {
        h,
        quad_order: order,
        stehfest_n: terms,
        init,
    };
    let v = fracderiv::fd_compute(
        &f,
        spec.as_ref(),
        &fd_order,
        DerivativeClass::from_str(class_).map_err(py_err)?,
        FdMethod::from_str(method).map_err(py_err)?,
        &params,
        t,
    )
    .map_err(py_err)?;
    Ok((v.value, v.est_error))
}

/// Closed-form fractional derivative of t^p.
#[pyfunction]
#[pyo3(signature = (p, alpha, t, *, class_ = "rl"))]
fn closed_form_power(p: f64, alpha: f64, t: f64, class_: &str) -> PyResult<f64> {
    let order = FractionalOrder::new(alpha).map_err(py_err)?;
    fracderiv::closed_form_power(
        p,
        &order,
        DerivativeClass::from_str(class_).map_err(py_err)?,
        t,
    )
    .map_err(py_err)
}

/// The builtin transform pairs as (name, function, transform, c0) tuples.
#[pyfunction]
fn pairs() -> Vec<(String, String, String, f64)> {
    laplace::builtin_pairs()
        .into_iter()
        .map(|p| {
            let name = match p.param {
                Some(v) => format!("{}:{v}", p.name),
                None => p.name,
            };
            (
                name,
                p.function_text,
                p.transform.expression,
                p.transform.c0,
            )
        })
        .collect()
}

/// A Gauss quadrature rule ("laguerre", "mgi", or "legendre").
#[pyclass]
struct Rule {
    inner: QuadratureRule,
}

#[pymethods]
impl Rule {
    #[new]
    #[pyo3(signature = (kind, n, gamma = None))]
    fn new(kind: &str, n: usize, gamma: Option<f64>) -> PyResult<Self> {
        let kind = RuleKind::from_str(kind).map_err(py_err)?;
        let g = match (kind, gamma) {
            (RuleKind::Legendre, Some(_)) => {
                return Err(PyValueError::new_err(
                    "gamma does not apply to legendre rules",
                ))
            }
            (RuleKind::Mgi, None) => 0.5,
            (_, g) => g.unwrap_or(0.0),
        };
        Ok(Rule {
            inner: quadrature::make_rule(kind, n, g).map_err(py_err)?,
        })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.as_str()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma_param
    }

    #[getter]
    fn nodes(&self) -> Vec<f64> {
        self.inner.nodes.clone()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights.clone()
    }

    /// Weighted sum over the nodes of a Python callable.
    fn integrate(&self, f: Bound<'_, PyAny>) -> PyResult<f64> {
        let mut acc = 0.0;
        for (x, w) in self.inner.nodes.iter().zip(self.inner.weights.iter()) {
            let v: f64 = f.call1((*x,))?.extract()?;
            if !v.is_finite() {
                return Err(PyValueError::new_err(format!(
                    "integrand value at node x = {x} is not finite"
                )));
            }
            acc += w * v;
        }
        Ok(acc)
    }

    /// Largest monomial degree reproduced within tol.
    #[pyo3(signature = (tol = 1e-8))]
    fn exactness_degree(&self, tol: f64) -> PyResult<usize> {
        quadrature::exactness_degree(&self.inner, tol).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Rule(kind='{}', n={}, gamma={})",
            self.inner.kind.as_str(),
            self.inner.order,
            self.inner.gamma_param
        )
    }
}

#[pymodule]
fn fracgauss_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(ln_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(recip_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(mittag_leffler, m)?)?;
    m.add_function(wrap_pyfunction!(gl_weights, m)?)?;
    m.add_function(wrap_pyfunction!(stehfest_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(eval_expr, m)?)?;
    m.add_function(wrap_pyfunction!(invert_laplace, m)?)?;
    m.add_function(wrap_pyfunction!(fractional_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_power, m)?)?;
    m.add_function(wrap_pyfunction!(pairs, m)?)?;
    m.add_class::<Rule>()?;
    Ok(())
}
