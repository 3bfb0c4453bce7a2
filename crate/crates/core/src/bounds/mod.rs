//! Upper bounds on the covering array number, one operation per published
//! formula or search, each returning a [`BoundResult`] with diagnostics.

mod coloring;
mod fixed_rows;
mod lll;
mod slj;
mod two_stage;

pub use coloring::{
    coloring_bound_min, coloring_chromatic_upper, coloring_expected_edges,
    coloring_expected_edges_approx, coloring_f,
};
pub use fixed_rows::{
    max_lambda_fixed_rows_elementary, max_lambda_fixed_rows_lll, max_lambda_fixed_rows_w,
    FixedRowsResult, FixedRowsStatus,
};
pub use lll::{lll_exact_min, lll_upper_elementary, lll_upper_w};
pub use slj::{slj_exact_min, slj_upper_elementary, slj_upper_w};
pub use two_stage::{
    two_stage_exact_min, two_stage_general_elementary, two_stage_general_w,
    two_stage_l2_elementary, two_stage_l2_w,
};

use crate::domain::{BoundResult, CAParams};
use crate::error::{Error, Result};

/// Smallest integer `n >= lo` with `pred(n)`, by doubling then bisection.
/// `pred` must be monotone (false..false, true..true). `cap` guards against
/// arithmetic bugs; theory guarantees a solution below it.
pub(crate) fn minimal_satisfying<P: Fn(u64) -> bool>(lo: u64, cap: u64, pred: P) -> Result<u64> {
    let mut hi = lo.max(1);
    while !pred(hi) {
        hi = hi.saturating_mul(2);
        if hi > cap {
            return Err(Error::Internal(format!(
                "exact-search exceeded its cap of {cap} rows"
            )));
        }
    }
    let mut lo = if hi == lo.max(1) { lo } else { hi / 2 };
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// Integer ternary search for the minimum of a convex objective on [lo, hi],
/// finished with a short local scan.
pub(crate) fn minimize_convex<F: Fn(u64) -> f64>(mut lo: u64, mut hi: u64, f: F) -> (u64, f64) {
    while hi - lo > 2 {
        let third = (hi - lo) / 3;
        let m1 = lo + third;
        let m2 = hi - third;
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let scan_lo = lo.saturating_sub(3);
    let scan_hi = hi + 3;
    let mut best = scan_lo;
    let mut best_val = f(scan_lo);
    for n in scan_lo + 1..=scan_hi {
        let val = f(n);
        if val < best_val {
            best = n;
            best_val = val;
        }
    }
    (best, best_val)
}

/// The smallest of the closed-form and family exact-search bounds, tagged
/// with the method that produced it. Two-stage l2 methods join only when
/// lambda = 2 and their Lambert argument is in range. Ties go to the method
/// earliest in the order exact-search, W-form, elementary.
pub fn best_bound(params: &CAParams) -> Result<BoundResult> {
    params.validate()?;
    let mut candidates: Vec<BoundResult> = vec![
        slj_exact_min(params)?,
        lll_exact_min(params)?,
        slj_upper_w(params)?,
        lll_upper_w(params)?,
    ];
    if params.lambda == 2 {
        if let Ok(b) = two_stage_l2_w(params) {
            candidates.push(b);
        }
    }
    candidates.push(two_stage_general_w(params)?);
    candidates.push(slj_upper_elementary(params)?);
    candidates.push(lll_upper_elementary(params)?);
    if params.lambda == 2 {
        if let Ok(b) = two_stage_l2_elementary(params) {
            candidates.push(b);
        }
    }
    candidates.push(two_stage_general_elementary(params)?);
    let best = candidates
        .into_iter()
        .min_by(|a, b| a.rows.cmp(&b.rows))
        .expect("candidate list is never empty");
    Ok(best)
}
