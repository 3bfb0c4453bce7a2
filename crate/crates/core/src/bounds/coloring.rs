//! Graph-coloring two-stage bound. The second stage colors the
//! incompatibility graph of deficient interaction replicas, so the quantity
//! to control is the expected number of edges after the random first stage.
//!
//! `coloring_expected_edges` is the exact expectation, split into
//! same-interaction replica pairs (binomial coverage count) and incompatible
//! interaction pairs (a trinomial joint, since one row can realize at most
//! one of two conflicting interactions). `coloring_expected_edges_approx` is
//! the factored per-cell-tail estimate that admits the analytic
//! `N + sqrt(q) N^lambda (1-p)^{N+1}` first-stage approximation; it
//! understates the pair term whenever the two column sets overlap only
//! partially, so the exact form is what the minimizer and the constructors
//! use.

use super::minimize_convex;
use super::slj::slj_exact_min;
use crate::domain::{derive, log_binomial, log_sum_exp, BoundMethod, BoundResult, CAParams};
use crate::error::{Error, Result};

/// The per-cell tail `sum_{j<lambda} C(N,j) x^-j (1 - 1/x)^{N-j}` for x > 1.
pub fn coloring_f(x: f64, n: u64, lambda: u32) -> Result<f64> {
    if x.is_nan() || x <= 1.0 {
        return Err(Error::Domain(format!("coloring_f requires x > 1, got {x}")));
    }
    if lambda < 1 {
        return Err(Error::Domain("coloring_f requires lambda >= 1".into()));
    }
    if n < u64::from(lambda) {
        return Ok(1.0);
    }
    let ln_x = x.ln();
    let ln_1m = (-1.0 / x).ln_1p();
    let mut terms = Vec::with_capacity(lambda as usize);
    for j in 0..u64::from(lambda) {
        terms.push(log_binomial(n, j)? - j as f64 * ln_x + (n - j) as f64 * ln_1m);
    }
    Ok(log_sum_exp(&terms).exp())
}

/// log of the number of interactions incompatible with any fixed one:
/// `sum_{i=1}^{t} C(t,i) C(k-t,t-i) (v^t - v^{t-i})`.
fn ln_incompatible_partners(params: &CAParams) -> Result<f64> {
    let t = u64::from(params.t);
    let vt = f64::from(params.v).powi(params.t as i32);
    let mut terms = Vec::new();
    for i in 1..=t {
        if t - i > params.k - t {
            continue;
        }
        let conflicting = vt - f64::from(params.v).powi((t - i) as i32);
        terms.push(log_binomial(t, i)? + log_binomial(params.k - t, t - i)? + conflicting.ln());
    }
    Ok(log_sum_exp(&terms))
}

/// Exact expected edge count of the incompatibility graph over a uniform
/// random N x k array.
///
/// Same interaction, replicas r1 != r2: each deficient interaction with
/// coverage b contributes C(lambda - b, 2) edges, B ~ Bin(N, p).
/// Incompatible pair: contributes (lambda - X1)^+ (lambda - X2)^+ edges where
/// (X1, X2) are the two coverage counts, jointly trinomial with cell
/// probabilities (p, p, 1-2p).
pub fn coloring_expected_edges(params: &CAParams, n: u64) -> Result<f64> {
    let d = derive(params)?;
    let lam = params.lambda;
    let ln_interactions = d.ln_binom_kt + d.ln_vt;

    let mut same_terms = Vec::new();
    for b in 0..u64::from(lam).min(n + 1) {
        let mult = u64::from(lam) - b; // replicas left to place
        if mult < 2 {
            continue;
        }
        let pairs = (mult * (mult - 1) / 2) as f64;
        same_terms.push(
            pairs.ln()
                + log_binomial(n, b)?
                + b as f64 * d.ln_p
                + (n - b) as f64 * d.ln_one_minus_p,
        );
    }
    let ln_same = if same_terms.is_empty() {
        f64::NEG_INFINITY
    } else {
        ln_interactions + log_sum_exp(&same_terms)
    };

    let ln_1m2p = (-2.0 * d.p).ln_1p();
    let mut joint_terms = Vec::new();
    for x1 in 0..u64::from(lam) {
        for x2 in 0..u64::from(lam) {
            if x1 + x2 > n {
                continue;
            }
            let weight = ((u64::from(lam) - x1) * (u64::from(lam) - x2)) as f64;
            joint_terms.push(
                weight.ln()
                    + log_binomial(n, x1)?
                    + log_binomial(n - x1, x2)?
                    + (x1 + x2) as f64 * d.ln_p
                    + (n - x1 - x2) as f64 * ln_1m2p,
            );
        }
    }
    let ln_pairs = if joint_terms.is_empty() {
        f64::NEG_INFINITY
    } else {
        0.5f64.ln()
            + ln_interactions
            + ln_incompatible_partners(params)?
            + log_sum_exp(&joint_terms)
    };

    let ln_r = log_sum_exp(&[ln_same, ln_pairs]);
    Ok(if ln_r > -700.0 { ln_r.exp() } else { 0.0 })
}

/// The factored estimate
/// `1/2 C(k,t) v^t sum_i C(t,i) C(k-t,t-i) (v^t - v^{t-i}) f(v^t) f(v^t - v^{t-i})`.
pub fn coloring_expected_edges_approx(params: &CAParams, n: u64) -> Result<f64> {
    let d = derive(params)?;
    let t = u64::from(params.t);
    let vt = f64::from(params.v).powi(params.t as i32);
    let f_vt = coloring_f(vt, n, params.lambda)?;
    let mut total = 0.0;
    for i in 1..=t {
        if t - i > params.k - t {
            continue;
        }
        let x2 = vt - f64::from(params.v).powi((t - i) as i32);
        let count = (log_binomial(t, i)? + log_binomial(params.k - t, t - i)?).exp() * x2;
        total += count * f_vt * coloring_f(x2, n, params.lambda)?;
    }
    Ok(0.5 * (d.ln_binom_kt + d.ln_vt).exp() * total)
}

/// Standard chromatic-number bound from the edge count: `1/2 + sqrt(2r + 1/4)`.
pub fn coloring_chromatic_upper(r: f64) -> Result<f64> {
    if r.is_nan() || r < 0.0 {
        return Err(Error::Domain(format!(
            "coloring_chromatic_upper requires r >= 0, got {r}"
        )));
    }
    Ok(0.5 + (2.0 * r + 0.25).sqrt())
}

/// log q for the analytic first-stage approximation; defined for k >= 2t + 1.
fn ln_q(params: &CAParams) -> Result<Option<f64>> {
    let t = u64::from(params.t);
    if params.k < 2 * t + 1 {
        return Ok(None);
    }
    let lam = f64::from(params.lambda);
    let lc = log_binomial(params.k, t)?;
    let delta = lc - log_binomial(params.k - t, t)?;
    let ln = lc + 2.0 * f64::from(params.t) * f64::from(params.v).ln() - 2f64.ln()
        + 2.0 * lam * (1.0 - lam.ln())
        + ((params.k - 2 * t) as f64).ln()
        + log_binomial(params.k - t, t - 1)?
        + delta.exp_m1().ln()
        - (t as f64).ln();
    Ok(Some(ln))
}

/// Minimizes the exact objective `N + (1/2 + sqrt(2 r(N) + 1/4))` over
/// integer N. Diagnostics carry the exact argmin, the expected edges and
/// chromatic bound there, and (when defined) the argmin of the analytic
/// approximation `N + sqrt(q) N^lambda (1-p)^{N+1}`.
pub fn coloring_bound_min(params: &CAParams) -> Result<BoundResult> {
    let d = derive(params)?;
    let hi = slj_exact_min(params)?.rows + u64::from(params.lambda) + 10;
    let objective = |n: u64| {
        let r = coloring_expected_edges(params, n).expect("validated params");
        n as f64 + coloring_chromatic_upper(r).expect("r >= 0")
    };
    let (argmin, value) = minimize_convex(0, hi, objective);
    let r_at = coloring_expected_edges(params, argmin)?;
    let mut out = BoundResult::from_objective(BoundMethod::ColoringBoundMin, value)
        .with("argmin_n", argmin as f64)
        .with("expected_edges", r_at)
        .with("chromatic_upper", coloring_chromatic_upper(r_at)?);
    if let Some(lq) = ln_q(params)? {
        let approx = |n: u64| {
            if n == 0 {
                return f64::INFINITY;
            }
            n as f64
                + (0.5 * lq
                    + f64::from(params.lambda) * (n as f64).ln()
                    + (n as f64 + 1.0) * d.ln_one_minus_p)
                    .exp()
        };
        let (approx_argmin, _) = minimize_convex(1, hi.max(4) * 4, approx);
        out = out.with("approx_argmin_n", approx_argmin as f64);
    }
    Ok(out)
}
