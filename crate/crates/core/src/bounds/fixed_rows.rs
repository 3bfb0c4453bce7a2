//! With the row count fixed, how much coverage multiplicity is guaranteed to
//! exist? Inverting the W-form union bound for lambda answers that, with an
//! elementary variant and a local-lemma variant (which needs no -1
//! adjustment because its inequality is non-strict).

use std::f64::consts::E;

use super::lll::ln_dependency;
use crate::domain::{derive, CAParams};
use crate::error::{Error, Result};
use crate::lambert::{lambert_wm1, DEFAULT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedRowsStatus {
    /// The returned lambda is a guaranteed coverage index.
    Proved,
    /// The formula produced lambda = 0: no guarantee at this row count.
    Vacuous,
}

#[derive(Debug, Clone)]
pub struct FixedRowsResult {
    pub lambda: u64,
    pub status: FixedRowsStatus,
    pub diagnostics: std::collections::BTreeMap<String, f64>,
}

impl FixedRowsResult {
    fn new(lambda_real: f64, subtract_one: bool) -> Self {
        let raw = lambda_real.ceil() as i64 - i64::from(subtract_one);
        let lambda = raw.max(0) as u64;
        FixedRowsResult {
            lambda,
            status: if lambda == 0 {
                FixedRowsStatus::Vacuous
            } else {
                FixedRowsStatus::Proved
            },
            diagnostics: std::collections::BTreeMap::new(),
        }
    }

    fn with(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.to_string(), value);
        self
    }
}

fn base_params(t: u32, k: u64, v: u32) -> Result<CAParams> {
    CAParams::new(t, k, v, 1)
}

/// ln b where `b = C(k,t) v^t (1-p)^{N+1} sqrt(1/(1-2p))`, with `lll` adding
/// the local-lemma factor `e (1 - C(k-t,t)/C(k,t))`.
fn ln_b(rows: u64, t: u32, k: u64, v: u32, lll: bool) -> Result<f64> {
    let params = base_params(t, k, v)?;
    let d = derive(&params)?;
    let front = if lll {
        1.0 + ln_dependency(&params)?
    } else {
        d.ln_binom_kt
    };
    Ok(front + d.ln_vt + (rows as f64 + 1.0) * d.ln_one_minus_p - 0.5 * (-2.0 * d.p).ln_1p())
}

fn check_range(ln_b: f64, rows: u64) -> Result<()> {
    if rows == 0 || ln_b <= -(rows as f64) {
        return Err(Error::FixedRowsBTooSmall {
            b: ln_b.exp(),
            rows,
        });
    }
    if ln_b >= 0.0 {
        return Err(Error::FixedRowsBTooLarge {
            b: ln_b.exp(),
            rows,
        });
    }
    Ok(())
}

/// `lambda = ceil(N exp(1 + W_{-1}(log b / (e N)))) - 1` for
/// `1/e^N < b < 1`.
pub fn max_lambda_fixed_rows_w(rows: u64, t: u32, k: u64, v: u32) -> Result<FixedRowsResult> {
    let lb = ln_b(rows, t, k, v, false)?;
    check_range(lb, rows)?;
    let x = lb / (E * rows as f64);
    let w = lambert_wm1(x, DEFAULT_TOL)?;
    let lambda_real = rows as f64 * (1.0 + w).exp();
    Ok(FixedRowsResult::new(lambda_real, true)
        .with("ln_b", lb)
        .with("b", lb.exp())
        .with("w_argument", x)
        .with("w_value", w)
        .with("lambda_real", lambda_real))
}

/// Elementary variant: `lambda = ceil(N exp(-(1 + e log(-N/log b))/(e-1))) - 1`;
/// never above the W variant.
pub fn max_lambda_fixed_rows_elementary(
    rows: u64,
    t: u32,
    k: u64,
    v: u32,
) -> Result<FixedRowsResult> {
    let lb = ln_b(rows, t, k, v, false)?;
    check_range(lb, rows)?;
    let z = (-(rows as f64) / lb).ln();
    let lambda_real = rows as f64 * (-(1.0 + E * z) / (E - 1.0)).exp();
    Ok(FixedRowsResult::new(lambda_real, true)
        .with("ln_b", lb)
        .with("b", lb.exp())
        .with("z", z)
        .with("lambda_real", lambda_real))
}

/// Local-lemma variant with `b' = e (C(k,t) - C(k-t,t)) v^t (1-p)^{N+1}
/// sqrt(1/(1-2p))`; the non-strict inequality removes the -1.
pub fn max_lambda_fixed_rows_lll(rows: u64, t: u32, k: u64, v: u32) -> Result<FixedRowsResult> {
    let lb = ln_b(rows, t, k, v, true)?;
    check_range(lb, rows)?;
    let x = lb / (E * rows as f64);
    let w = lambert_wm1(x, DEFAULT_TOL)?;
    let lambda_real = rows as f64 * (1.0 + w).exp();
    Ok(FixedRowsResult::new(lambda_real, false)
        .with("ln_b", lb)
        .with("b", lb.exp())
        .with("w_argument", x)
        .with("w_value", w)
        .with("lambda_real", lambda_real))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::slj_upper_w;
    use crate::domain::CAParams;

    #[test]
    fn thirty_rows_small_case() {
        let r = max_lambda_fixed_rows_w(30, 2, 3, 2).unwrap();
        assert_eq!(r.lambda, 1);
        assert_eq!(r.status, FixedRowsStatus::Proved);
        assert!((r.diagnostics["lambda_real"] - 1.531_173_4).abs() < 1e-5);

        let e = max_lambda_fixed_rows_elementary(30, 2, 3, 2).unwrap();
        assert!(e.lambda <= r.lambda);
        assert_eq!(e.lambda, 1);

        let l = max_lambda_fixed_rows_lll(30, 2, 3, 2).unwrap();
        assert_eq!(l.lambda, 2);
    }

    #[test]
    fn one_row_is_out_of_range() {
        let err = max_lambda_fixed_rows_w(1, 2, 3, 2).unwrap_err();
        assert!(matches!(err, Error::FixedRowsBTooLarge { .. }));
        let err = max_lambda_fixed_rows_elementary(1, 2, 3, 2).unwrap_err();
        assert!(matches!(err, Error::FixedRowsBTooLarge { .. }));
        let err = max_lambda_fixed_rows_lll(1, 2, 3, 2).unwrap_err();
        assert!(matches!(err, Error::FixedRowsBTooLarge { .. }));
    }

    #[test]
    fn lll_dominates_w_version_at_large_k() {
        for rows in [60u64, 80, 120] {
            let w = max_lambda_fixed_rows_w(rows, 2, 100, 2);
            let l = max_lambda_fixed_rows_lll(rows, 2, 100, 2);
            if let (Ok(w), Ok(l)) = (w, l) {
                assert!(l.lambda >= w.lambda, "rows = {rows}");
            }
        }
    }

    #[test]
    fn consistency_check_after_inversion() {
        // substituting the returned lambda back into b (eN/lambda)^lambda
        // must stay at most 1
        for (rows, t, k, v) in [(30u64, 2u32, 3u64, 2u32), (50, 2, 10, 2), (200, 3, 8, 2)] {
            let r = max_lambda_fixed_rows_w(rows, t, k, v).unwrap();
            if r.lambda == 0 {
                continue;
            }
            let lam = r.lambda as f64;
            let check = r.diagnostics["ln_b"] + lam * (1.0 + (rows as f64 / lam).ln());
            assert!(
                check.exp() <= 1.0 + 1e-9,
                "({rows},{t},{k},{v}): {}",
                check.exp()
            );
        }
    }

    #[test]
    fn round_trip_from_w_bound_rows() {
        // The W-form row bound at coverage lambda guarantees, at those rows,
        // a coverage of at least lambda via the best fixed-rows variant (the
        // plain W variant alone loses one unit to its ceil - 1).
        let params = CAParams::new(2, 10, 2, 3).unwrap();
        let rows = slj_upper_w(&params).unwrap().rows;
        let w = max_lambda_fixed_rows_w(rows, 2, 10, 2).unwrap();
        assert_eq!(w.lambda, 2); // frozen: one below the target index
        let l = max_lambda_fixed_rows_lll(rows, 2, 10, 2).unwrap();
        assert!(w.lambda.max(l.lambda) >= 3);
    }
}
