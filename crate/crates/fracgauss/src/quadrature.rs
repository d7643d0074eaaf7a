//! Gauss-type quadrature rules built from three-term recurrence coefficients.
//!
//! Two weight families live on (0, inf): the Laguerre weight e^{-u} and its
//! generalized form u^gamma e^{-u} (called "mgi" throughout, after the
//! modified rule it feeds in the inversion module). The Legendre weight 1 on
//! (-1, 1) supports the direct time-domain integrals. Coefficients come
//! either from closed forms or from raw moments via the Chebyshev algorithm;
//! nodes and weights come from the symmetric tridiagonal Jacobi matrix,
//! solved with an implicit QL iteration that accumulates only the first
//! eigenvector component of each eigenvalue.

use crate::error::{Error, Result};
use crate::specfun;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    Laguerre,
    Mgi,
    Legendre,
}

impl RuleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleKind::Laguerre => "laguerre",
            RuleKind::Mgi => "mgi",
            RuleKind::Legendre => "legendre",
        }
    }
}

impl std::str::FromStr for RuleKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "laguerre" => Ok(RuleKind::Laguerre),
            "mgi" => Ok(RuleKind::Mgi),
            "legendre" => Ok(RuleKind::Legendre),
            other => Err(Error::InvalidArgument(format!(
                "unknown rule kind '{other}' (expected laguerre, mgi, or legendre)"
            ))),
        }
    }
}

/// Diagonal terms alpha_0..alpha_{n-1}, off-diagonal terms beta_1..beta_{n-1}
/// and the zeroth moment of the generating weight function.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceCoefficients {
    pub alpha_seq: Vec<f64>,
    pub beta_seq: Vec<f64>,
    pub mu0: f64,
}

impl RecurrenceCoefficients {
    fn validate(&self) -> Result<()> {
        if self.alpha_seq.is_empty() {
            return Err(Error::InvalidArgument(
                "recurrence needs at least one diagonal term".into(),
            ));
        }
        if self.beta_seq.len() + 1 != self.alpha_seq.len() {
            return Err(Error::InvalidArgument(format!(
                "inconsistent recurrence lengths: {} diagonal vs {} off-diagonal terms",
                self.alpha_seq.len(),
                self.beta_seq.len()
            )));
        }
        if !(self.mu0 > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "zeroth moment must be positive, got {}",
                self.mu0
            )));
        }
        if let Some(b) = self.beta_seq.iter().find(|b| !(**b > 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "off-diagonal recurrence terms must be positive, got {b}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub order: usize,
    /// Weight exponent for the (0, inf) families; 0 for Legendre.
    pub gamma_param: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Closed-form recurrence coefficients for each weight family:
/// u^g e^{-u}: alpha_j = 2j + g + 1, beta_j = j(j + g), mu0 = Gamma(g+1);
/// Legendre:   alpha_j = 0,          beta_j = j^2/(4j^2-1), mu0 = 2.
pub fn recurrence_coefficients(
    kind: RuleKind,
    n: usize,
    gamma_param: f64,
) -> Result<RecurrenceCoefficients> {
    if n < 1 {
        return Err(Error::InvalidArgument("rule order must be >= 1".into()));
    }
    match kind {
        RuleKind::Laguerre | RuleKind::Mgi => {
            if !(gamma_param > -1.0) {
                return Err(Error::InvalidArgument(format!(
                    "weight exponent must exceed -1, got {gamma_param}"
                )));
            }
            let g = gamma_param;
            let alpha_seq = (0..n).map(|j| 2.0 * j as f64 + g + 1.0).collect();
            let beta_seq = (1..n).map(|j| j as f64 * (j as f64 + g)).collect();
            Ok(RecurrenceCoefficients {
                alpha_seq,
                beta_seq,
                mu0: specfun::gamma(g + 1.0)?,
            })
        }
        RuleKind::Legendre => {
            let alpha_seq = vec![0.0; n];
            let beta_seq = (1..n)
                .map(|j| {
                    let jj = (j * j) as f64;
                    jj / (4.0 * jj - 1.0)
                })
                .collect();
            Ok(RecurrenceCoefficients {
                alpha_seq,
                beta_seq,
                mu0: 2.0,
            })
        }
    }
}

/// Chebyshev moment algorithm: recover recurrence coefficients of order
/// n from the first 2n raw moments. Exact in exact arithmetic but
/// ill-conditioned in doubles beyond n of roughly 12; fails loudly when the
/// moment sequence is not (numerically) positive definite.
pub fn moments_to_recurrence(moments: &[f64]) -> Result<RecurrenceCoefficients> {
    let len = moments.len();
    if len < 2 || len % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "need an even number (>= 2) of moments, got {len}"
        )));
    }
    let n = len / 2;
    if !(moments[0] > 0.0) {
        return Err(Error::MomentBreakdown {
            index: 0,
            beta: moments[0],
        });
    }
    let mut alpha = vec![moments[1] / moments[0]];
    let mut beta: Vec<f64> = Vec::new();
    // sigma rows for k-1 and k-2; row k=0 is the moment sequence itself
    let mut prev2 = vec![0.0; len];
    let mut prev = moments.to_vec();
    for k in 1..n {
        let mut cur = vec![0.0; len];
        let b_prev = if k >= 2 { beta[k - 2] } else { 0.0 };
        for j in k..(2 * n - k) {
            cur[j] = prev[j + 1] - alpha[k - 1] * prev[j] - b_prev * prev2[j];
        }
        let num = cur[k];
        let den = prev[k - 1];
        let b = num / den;
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::MomentBreakdown { index: k, beta: b });
        }
        beta.push(b);
        alpha.push(cur[k + 1] / cur[k] - prev[k] / prev[k - 1]);
        prev2 = prev;
        prev = cur;
    }
    Ok(RecurrenceCoefficients {
        alpha_seq: alpha,
        beta_seq: beta,
        mu0: moments[0],
    })
}

/// Implicit QL with Wilkinson shifts on the symmetric tridiagonal matrix.
/// `d` holds the diagonal, `e` the off-diagonal in e[0..n-1] (e[n-1] is
/// scratch), `z` accumulates the first row of the eigenvector matrix.
fn ql_implicit(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= 1e-14 * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > 50 {
                return Err(Error::EigenNoConverge(l));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // rotation annihilated early; drop the shift and retest
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Nodes = eigenvalues of the Jacobi matrix, weight_k = mu0 * z_k^2 where
/// z_k is the first component of the k-th normalized eigenvector.
pub fn golub_welsch(
    coeffs: &RecurrenceCoefficients,
    order: usize,
    kind: RuleKind,
    gamma_param: f64,
) -> Result<QuadratureRule> {
    coeffs.validate()?;
    if order < 1 || order > coeffs.alpha_seq.len() {
        return Err(Error::InvalidArgument(format!(
            "order {order} outside the range supported by {} recurrence terms",
            coeffs.alpha_seq.len()
        )));
    }
    let mut d: Vec<f64> = coeffs.alpha_seq[..order].to_vec();
    let mut e: Vec<f64> = (0..order)
        .map(|i| {
            if i + 1 < order {
                coeffs.beta_seq[i].sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let mut z = vec![0.0; order];
    z[0] = 1.0;
    ql_implicit(&mut d, &mut e, &mut z)?;

    let mut idx: Vec<usize> = (0..order).collect();
    idx.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let nodes: Vec<f64> = idx.iter().map(|&i| d[i]).collect();
    let weights: Vec<f64> = idx.iter().map(|&i| coeffs.mu0 * z[i] * z[i]).collect();

    // rule invariants: separated nodes, inside the support, positive weights
    if order > 1 {
        let span = nodes[order - 1] - nodes[0];
        for k in 1..order {
            if nodes[k] - nodes[k - 1] < 1e-12 * span {
                return Err(Error::Degenerate(format!(
                    "nodes {} and {} coincide within tolerance (off-diagonal positivity is broken)",
                    k - 1,
                    k
                )));
            }
        }
    }
    let inside = match kind {
        RuleKind::Laguerre | RuleKind::Mgi => nodes[0] > 0.0,
        RuleKind::Legendre => nodes[0] > -1.0 && nodes[order - 1] < 1.0,
    };
    if !inside {
        return Err(Error::Degenerate(
            "computed nodes escape the weight's support".into(),
        ));
    }
    if let Some(k) = weights.iter().position(|w| !(*w > 0.0)) {
        return Err(Error::Degenerate(format!(
            "weight {k} is not strictly positive"
        )));
    }
    Ok(QuadratureRule {
        kind,
        order,
        gamma_param: if kind == RuleKind::Legendre {
            0.0
        } else {
            gamma_param
        },
        nodes,
        weights,
    })
}

/// Closed-form coefficients followed by the eigensolve.
pub fn make_rule(kind: RuleKind, n: usize, gamma_param: f64) -> Result<QuadratureRule> {
    let coeffs = recurrence_coefficients(kind, n, gamma_param)?;
    golub_welsch(&coeffs, n, kind, gamma_param)
}

/// Sum w_k g(x_k): approximates the weighted integral of g over the rule's
/// support, exactly (up to rounding) for polynomials of degree <= 2n-1.
pub fn integrate<G: Fn(f64) -> f64>(rule: &QuadratureRule, g: G) -> Result<f64> {
    let mut acc = 0.0;
    for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
        let v = g(*x);
        if !v.is_finite() {
            return Err(Error::NonFinite(format!(
                "integrand value at node x = {x} is not finite"
            )));
        }
        acc += w * v;
    }
    Ok(acc)
}

fn exact_moment(kind: RuleKind, gamma_param: f64, j: usize) -> Result<f64> {
    match kind {
        RuleKind::Laguerre | RuleKind::Mgi => specfun::gamma(gamma_param + j as f64 + 1.0),
        RuleKind::Legendre => {
            if j % 2 == 0 {
                Ok(2.0 / (j as f64 + 1.0))
            } else {
                Ok(0.0)
            }
        }
    }
}

/// Largest degree d such that every monomial u^j, j <= d, is reproduced
/// within `tol`. The comparison scale is max(|exact moment|, sum_k w_k |x_k|^j)
/// so that exactly-zero moments (odd Legendre) are judged against the
/// magnitude actually flowing through the sum rather than against zero.
pub fn exactness_degree(rule: &QuadratureRule, tol: f64) -> Result<usize> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let cap = 2 * rule.order + 16;
    for j in 0..=cap {
        let exact = exact_moment(rule.kind, rule.gamma_param, j)?;
        let mut q = 0.0;
        let mut mag = 0.0;
        for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
            let p = x.powi(j as i32);
            q += w * p;
            mag += w.abs() * p.abs();
        }
        let scale = exact.abs().max(mag);
        if (q - exact).abs() > tol * scale {
            return Ok(j.saturating_sub(1));
        }
    }
    Ok(cap)
}

/// |integral over rule_hi - integral over rule_lo|, the empirical error bound
/// attached to the low-order result.
pub fn estimate_error<G: Fn(f64) -> f64>(
    rule_lo: &QuadratureRule,
    rule_hi: &QuadratureRule,
    g: G,
) -> Result<f64> {
    if rule_lo.kind != rule_hi.kind {
        return Err(Error::InvalidArgument(format!(
            "rule kind mismatch: {} vs {}",
            rule_lo.kind.as_str(),
            rule_hi.kind.as_str()
        )));
    }
    if rule_lo.gamma_param != rule_hi.gamma_param {
        return Err(Error::InvalidArgument(format!(
            "weight exponent mismatch: {} vs {}",
            rule_lo.gamma_param, rule_hi.gamma_param
        )));
    }
    if rule_hi.order <= rule_lo.order {
        return Err(Error::InvalidArgument(
            "the comparison rule must have strictly higher order".into(),
        ));
    }
    Ok((integrate(rule_hi, &g)? - integrate(rule_lo, &g)?).abs())
}
