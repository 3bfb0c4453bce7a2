//! Lovasz-local-lemma upper bounds. Each column t-set event depends on
//! exactly `C(k,t) - C(k-t,t) - 1` others, which replaces the plain union
//! bound once k is large enough.

use super::minimal_satisfying;
use super::slj::{elementary_bound, search_cap, w_argument};
use crate::domain::{derive, log_binomial, log_binomial_tail, BoundMethod, BoundResult, CAParams};
use crate::error::Result;
use crate::lambert::{lambert_wm1, WBranch, DEFAULT_TOL};

/// log(C(k,t) - C(k-t,t)): the number of events any single event depends on,
/// plus one. For k < 2t no disjoint t-set exists and the subtrahend is zero.
pub(crate) fn ln_dependency(params: &CAParams) -> Result<f64> {
    let lc = log_binomial(params.k, u64::from(params.t))?;
    let kt = params.k - u64::from(params.t);
    if kt < u64::from(params.t) {
        return Ok(lc);
    }
    let lc2 = log_binomial(kt, u64::from(params.t))?;
    Ok(lc + (-((lc2 - lc).exp())).ln_1p())
}

/// Smallest N with `e (C(k,t) - C(k-t,t)) v^t P(Bin(N,p) < lambda) <= 1`
/// (the local lemma needs only non-strict inequality).
pub fn lll_exact_min(params: &CAParams) -> Result<BoundResult> {
    let d = derive(params)?;
    let base = 1.0 + ln_dependency(params)? + d.ln_vt;
    let cap = search_cap(params)?;
    let lam = params.lambda;
    let p = d.p;
    let n = minimal_satisfying(u64::from(lam), cap, |n| {
        base + log_binomial_tail(n, lam, p).expect("validated p") <= 0.0
    })?;
    Ok(BoundResult::from_search(BoundMethod::LllExactMin, n))
}

/// W-form local-lemma bound; no "+1" term is needed.
pub fn lll_upper_w(params: &CAParams) -> Result<BoundResult> {
    let d = derive(params)?;
    let big = ln_dependency(params)? + d.ln_vt + d.ln_a + d.ln_one_minus_p + 1.0;
    let x = w_argument(&d, big, f64::from(params.lambda));
    let w = lambert_wm1(x, DEFAULT_TOL)?;
    let real = f64::from(params.lambda) / d.ln_one_minus_p * w;
    Ok(BoundResult::from_formula(BoundMethod::LllUpperW, real)
        .with("w_argument", x)
        .with("w_value", w)
        .with("branch", WBranch::NegativeOne.index()))
}

/// Elementary form of the local-lemma bound.
pub fn lll_upper_elementary(params: &CAParams) -> Result<BoundResult> {
    let d = derive(params)?;
    let big = ln_dependency(params)? + d.ln_vt + d.ln_a + d.ln_one_minus_p + 1.0;
    let (real, z) = elementary_bound(&d, big, f64::from(params.lambda), 0.0);
    Ok(BoundResult::from_formula(BoundMethod::LllUpperElementary, real).with("z", z))
}
