//! Both real branches of the Lambert W function (the inverse of w e^w), plus
//! the elementary lower bound on W_{-1} used by the closed-form corollaries.
//!
//! Evaluation: an asymptotic or branch-point initial guess refined by Halley
//! iteration to ~1e-14 relative, with a guaranteed bisection fallback. The
//! `tol` argument is the residual acceptance tolerance
//! `|w e^w - x| <= tol * max(|x|, 1)`.

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-12;

const E: f64 = std::f64::consts::E;
const INV_E: f64 = 1.0 / std::f64::consts::E;
/// Within this distance of the branch point -1/e both branches return -1
/// directly; the expansions are ill-conditioned there.
const BRANCH_EPS: f64 = 1e-12;
const MAX_ITER: usize = 100;

/// The two real branches: `Principal` is W_0 (values in [-1, inf)),
/// `NegativeOne` is W_{-1} (values in (-inf, -1]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WBranch {
    Principal,
    NegativeOne,
}

impl WBranch {
    /// Numeric tag used in diagnostics maps.
    pub fn index(&self) -> f64 {
        match self {
            WBranch::Principal => 0.0,
            WBranch::NegativeOne => -1.0,
        }
    }
}

/// Evaluates the requested branch.
pub fn lambert_w(branch: WBranch, x: f64, tol: f64) -> Result<f64> {
    match branch {
        WBranch::Principal => lambert_w0(x, tol),
        WBranch::NegativeOne => lambert_wm1(x, tol),
    }
}

/// W_0(x) for x >= -1/e.
pub fn lambert_w0(x: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if !x.is_finite() {
        return Err(Error::Domain(format!(
            "lambert_w0: x must be finite, got {x}"
        )));
    }
    if x < -INV_E - BRANCH_EPS {
        return Err(Error::Domain(format!(
            "lambert_w0: x = {x} is below the branch point -1/e"
        )));
    }
    if (x + INV_E).abs() <= BRANCH_EPS {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let guess = if x < -INV_E + 0.04 {
        let p = (2.0 * (E * x + 1.0)).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0
    } else if x < E {
        // W_0(x) ~ log(1+x) is a serviceable start on the moderate range
        x.ln_1p()
    } else {
        let lx = x.ln();
        lx - lx.ln()
    };
    let w = halley(x, guess).filter(|w| residual_ok(*w, x, tol));
    let w = match w {
        Some(w) => w,
        None => bisect_w0(x),
    };
    if !residual_ok(w, x, tol) {
        return Err(Error::Internal(format!(
            "lambert_w0 failed to meet tolerance at x = {x}"
        )));
    }
    Ok(w.max(-1.0))
}

/// W_{-1}(x) for -1/e <= x < 0.
pub fn lambert_wm1(x: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if x.is_nan() || x >= 0.0 {
        return Err(Error::Domain(format!(
            "lambert_wm1: x must be negative, got {x}"
        )));
    }
    if x < -INV_E - BRANCH_EPS {
        return Err(Error::Domain(format!(
            "lambert_wm1: x = {x} is below the branch point -1/e"
        )));
    }
    if (x + INV_E).abs() <= BRANCH_EPS {
        return Ok(-1.0);
    }
    let guess = if x < -INV_E + 0.04 {
        let p = (2.0 * (E * x + 1.0)).sqrt();
        -1.0 - p - p * p / 3.0 - 11.0 * p * p * p / 72.0
    } else {
        // w ~ log(-x) - log(-log(-x)) for x -> 0^-
        let l1 = (-x).ln();
        let l2 = (-l1).ln();
        l1 - l2 + l2 / l1
    };
    let w = halley(x, guess).filter(|w| residual_ok(*w, x, tol));
    let w = match w {
        Some(w) => w,
        None => bisect_wm1(x),
    };
    if !residual_ok(w, x, tol) {
        return Err(Error::Internal(format!(
            "lambert_wm1 failed to meet tolerance at x = {x}"
        )));
    }
    Ok(w.min(-1.0))
}

/// The Alzahrani-Salem bound: -(e/(e-1)) (z+1), which lies strictly below
/// W_{-1}(-e^{-z-1}) for every z >= 0.
pub fn wm1_lower_bound(z: f64) -> Result<f64> {
    if z.is_nan() || z < 0.0 {
        return Err(Error::Domain(format!(
            "wm1_lower_bound requires z >= 0, got {z}"
        )));
    }
    Ok(-(E / (E - 1.0)) * (z + 1.0))
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(())
}

fn residual_ok(w: f64, x: f64, tol: f64) -> bool {
    (w * w.exp() - x).abs() <= tol * x.abs().max(1.0)
}

/// Halley iteration on f(w) = w e^w - x; returns None if it fails to settle.
fn halley(x: f64, mut w: f64) -> Option<f64> {
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        if f == 0.0 {
            return Some(w);
        }
        let w1 = w + 1.0;
        let denom = ew * w1 - (w + 2.0) * f / (2.0 * w1);
        if denom == 0.0 || !denom.is_finite() {
            return None;
        }
        let step = f / denom;
        let next = w - step;
        if !next.is_finite() {
            return None;
        }
        if (next - w).abs() <= 1e-14 * (next.abs() + 1e-300) {
            return Some(next);
        }
        w = next;
    }
    Some(w)
}

fn bisect_w0(x: f64) -> f64 {
    // g(w) = w e^w is increasing on [-1, inf)
    let mut lo = -1.0f64;
    let mut hi = if x <= 0.0 {
        0.0
    } else {
        let mut h = 1.0f64;
        while h * h.exp() < x {
            h *= 2.0;
        }
        h
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid.exp() < x {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn bisect_wm1(x: f64) -> f64 {
    // g(w) = w e^w is decreasing on (-inf, -1]; g(-1) = -1/e, g(-inf) -> 0^-
    let mut hi = -1.0f64;
    let mut lo = -2.0f64;
    while lo * lo.exp() < x {
        lo *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid.exp() > x {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * lo.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}
