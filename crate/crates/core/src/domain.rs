//! Problem parameters and the shared derived quantities every bound formula uses.
//!
//! All heavy arithmetic is done in the log domain: binomial coefficients at
//! column counts up to 10^10 and tails with large exponents do not fit in a
//! fixed-width float otherwise.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default limit on the number of interaction counters any dense algorithm
/// may allocate. Override with the `CA_LAMBDA_CAP` environment variable.
pub const DEFAULT_INTERACTION_CAP: u64 = 10_000_000;

static CAP: OnceLock<u64> = OnceLock::new();

/// The effective interaction cap (reads `CA_LAMBDA_CAP` once).
pub fn interaction_cap() -> u64 {
    *CAP.get_or_init(|| {
        std::env::var("CA_LAMBDA_CAP")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(DEFAULT_INTERACTION_CAP)
    })
}

/// Problem parameters: strength `t`, columns `k`, alphabet size `v`, and the
/// coverage index `lambda` (minimum multiplicity required of every t-way
/// interaction).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CAParams {
    pub t: u32,
    pub k: u64,
    pub v: u32,
    pub lambda: u32,
}

impl CAParams {
    pub fn new(t: u32, k: u64, v: u32, lambda: u32) -> Result<Self> {
        let p = Self { t, k, v, lambda };
        p.validate()?;
        Ok(p)
    }

    /// Checks `k >= t >= 2`, `v >= 2`, `lambda >= 1`, and that `v^-t` is
    /// representable (so log-domain formulas stay finite).
    pub fn validate(&self) -> Result<()> {
        if self.t < 2 {
            return Err(Error::InvalidParams(format!(
                "strength t must be at least 2, got t = {}",
                self.t
            )));
        }
        if self.k < u64::from(self.t) {
            return Err(Error::InvalidParams(format!(
                "column count k must be at least t, got k = {} < t = {}",
                self.k, self.t
            )));
        }
        if self.v < 2 {
            return Err(Error::InvalidParams(format!(
                "alphabet size v must be at least 2, got v = {}",
                self.v
            )));
        }
        if self.lambda < 1 {
            return Err(Error::InvalidParams(format!(
                "coverage index lambda must be at least 1, got lambda = {}",
                self.lambda
            )));
        }
        let ln_vt = f64::from(self.t) * f64::from(self.v).ln();
        if (-ln_vt).exp() == 0.0 {
            return Err(Error::InvalidParams(format!(
                "v^t overflows the floating-point range (t = {}, v = {})",
                self.t, self.v
            )));
        }
        Ok(())
    }

    /// `C(k,t) * v^t` if it fits in a `u64`.
    pub fn interaction_count(&self) -> Option<u64> {
        let combos = binomial_u128(self.k, u64::from(self.t))?;
        let vt = (0..self.t).try_fold(1u128, |acc, _| acc.checked_mul(u128::from(self.v)))?;
        let n = combos.checked_mul(vt)?;
        u64::try_from(n).ok()
    }

    /// Errors unless `C(k,t) * v^t` fits under the interaction cap.
    pub fn check_cap(&self) -> Result<u64> {
        let cap = interaction_cap();
        let needed = match (
            binomial_u128(self.k, u64::from(self.t)),
            (0..self.t).try_fold(1u128, |acc, _| acc.checked_mul(u128::from(self.v))),
        ) {
            (Some(c), Some(vt)) => c.checked_mul(vt),
            _ => None,
        };
        match needed {
            Some(n) if n <= u128::from(cap) => Ok(n as u64),
            Some(n) => Err(Error::CapExceeded { needed: n, cap }),
            None => Err(Error::CapExceeded {
                needed: u128::MAX,
                cap,
            }),
        }
    }
}

fn binomial_u128(n: u64, r: u64) -> Option<u128> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 1..=r {
        acc = acc.checked_mul(u128::from(n - r + i))?;
        acc /= u128::from(i);
    }
    Some(acc)
}

/// Quantities shared by every bound formula, all precomputed in log form.
#[derive(Debug, Clone, Copy)]
pub struct DerivedQuantities {
    /// p = v^-t, the probability a uniform row realizes a fixed interaction.
    pub p: f64,
    pub ln_p: f64,
    /// log(1 - p)
    pub ln_one_minus_p: f64,
    /// The Cauchy-Schwarz constant a = sqrt(((1-p)^{2 lambda} - p^{2 lambda}) / (1 - 2p)).
    pub a: f64,
    pub ln_a: f64,
    /// log C(k, t)
    pub ln_binom_kt: f64,
    /// t * log v
    pub ln_vt: f64,
}

/// Computes the derived quantities for validated parameters.
///
/// `a` is evaluated as
/// `log a = ((log1p(-exp(2 lambda (log p - log(1-p)))) + 2 lambda log(1-p)) - log(1-2p)) / 2`
/// so that `p^{2 lambda}` never underflows on its own.
pub fn derive(params: &CAParams) -> Result<DerivedQuantities> {
    params.validate()?;
    let ln_vt = f64::from(params.t) * f64::from(params.v).ln();
    let ln_p = -ln_vt;
    let p = ln_p.exp();
    let ln_one_minus_p = (-p).ln_1p();
    let lam = f64::from(params.lambda);
    let ln_a = if params.lambda == 1 {
        // ((1-p)^2 - p^2) / (1-2p) = 1 identically
        0.0
    } else {
        let ratio = 2.0 * lam * (ln_p - ln_one_minus_p);
        0.5 * ((-ratio.exp()).ln_1p() + 2.0 * lam * ln_one_minus_p - (-2.0 * p).ln_1p())
    };
    Ok(DerivedQuantities {
        p,
        ln_p,
        ln_one_minus_p,
        a: ln_a.exp(),
        ln_a,
        ln_binom_kt: log_binomial(params.k, u64::from(params.t))?,
        ln_vt,
    })
}

/// log C(n, r) with relative error well under 1e-12.
///
/// Small `min(r, n-r)` (the only regime the bound formulas hit) is summed
/// directly; the general case falls back to a Stirling-series log-gamma.
pub fn log_binomial(n: u64, r: u64) -> Result<f64> {
    if r > n {
        return Err(Error::Domain(format!(
            "log_binomial requires r <= n, got n = {n}, r = {r}"
        )));
    }
    let r = r.min(n - r);
    if r == 0 {
        return Ok(0.0);
    }
    if r <= 4096 {
        let mut acc = 0.0;
        for i in 1..=r {
            acc += ((n - r + i) as f64).ln() - (i as f64).ln();
        }
        return Ok(acc);
    }
    Ok(ln_gamma(n as f64 + 1.0) - ln_gamma(r as f64 + 1.0) - ln_gamma((n - r) as f64 + 1.0))
}

/// Stirling-series log-gamma, accurate to ~1e-14 relative for x >= 10.
/// Arguments below 10 are shifted up via Gamma(x) = Gamma(x+n) / (x...(x+n-1)).
fn ln_gamma(mut x: f64) -> f64 {
    let mut shift = 0.0;
    while x < 10.0 {
        shift -= x.ln();
        x += 1.0;
    }
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
    ];
    let ln_2pi = (2.0 * std::f64::consts::PI).ln();
    let mut series = 0.0;
    let x2 = x * x;
    let mut xp = x;
    for c in C {
        series += c / xp;
        xp *= x2;
    }
    shift + (x - 0.5) * x.ln() - x + 0.5 * ln_2pi + series
}

/// Log of the lower binomial tail `sum_{i=0}^{lambda-1} C(n,i) p^i (1-p)^{n-i}`.
///
/// For `n < lambda` the partial sum is the whole distribution, so the result
/// is exactly 0 (= log 1). Otherwise a log-sum-exp over the `lambda` terms.
pub fn log_binomial_tail(n: u64, lambda: u32, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!(
            "log_binomial_tail requires 0 < p < 1, got p = {p}"
        )));
    }
    if lambda < 1 {
        return Err(Error::Domain(
            "log_binomial_tail requires lambda >= 1".into(),
        ));
    }
    if n < u64::from(lambda) {
        return Ok(0.0);
    }
    let ln_p = p.ln();
    let ln_1mp = (-p).ln_1p();
    let mut terms = Vec::with_capacity(lambda as usize);
    for i in 0..u64::from(lambda) {
        terms.push(log_binomial(n, i)? + i as f64 * ln_p + (n - i) as f64 * ln_1mp);
    }
    Ok(log_sum_exp(&terms))
}

/// log(sum exp(t_i)), tolerating -inf entries.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

/// Tags for every bound the crate computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundMethod {
    SljExactMin,
    SljUpperW,
    SljUpperElementary,
    LllExactMin,
    LllUpperW,
    LllUpperElementary,
    TwoStageL2W,
    TwoStageL2Elementary,
    TwoStageExactMin,
    TwoStageGeneralW,
    TwoStageGeneralElementary,
    ColoringBoundMin,
}

impl BoundMethod {
    pub const ALL: [BoundMethod; 12] = [
        BoundMethod::SljExactMin,
        BoundMethod::SljUpperW,
        BoundMethod::SljUpperElementary,
        BoundMethod::LllExactMin,
        BoundMethod::LllUpperW,
        BoundMethod::LllUpperElementary,
        BoundMethod::TwoStageL2W,
        BoundMethod::TwoStageL2Elementary,
        BoundMethod::TwoStageExactMin,
        BoundMethod::TwoStageGeneralW,
        BoundMethod::TwoStageGeneralElementary,
        BoundMethod::ColoringBoundMin,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            BoundMethod::SljExactMin => "slj_exact",
            BoundMethod::SljUpperW => "slj_w",
            BoundMethod::SljUpperElementary => "slj_elementary",
            BoundMethod::LllExactMin => "lll_exact",
            BoundMethod::LllUpperW => "lll_w",
            BoundMethod::LllUpperElementary => "lll_elementary",
            BoundMethod::TwoStageL2W => "two_stage_l2_w",
            BoundMethod::TwoStageL2Elementary => "two_stage_l2_elementary",
            BoundMethod::TwoStageExactMin => "two_stage_exact",
            BoundMethod::TwoStageGeneralW => "two_stage_w",
            BoundMethod::TwoStageGeneralElementary => "two_stage_elementary",
            BoundMethod::ColoringBoundMin => "two_stage_coloring",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|m| m.tag() == s)
    }
}

impl fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A computed upper bound: the real-valued right-hand side, the claimed
/// integer row bound, and named intermediates for inspection.
#[derive(Debug, Clone)]
pub struct BoundResult {
    pub method: BoundMethod,
    /// The bound before integer truncation.
    pub real_bound: f64,
    /// The claimed integer upper bound on the covering array number.
    pub rows: u64,
    pub diagnostics: BTreeMap<String, f64>,
}

impl BoundResult {
    /// A closed-formula bound: any integer row count up to the real bound
    /// works, so the integer bound is the floor.
    pub(crate) fn from_formula(method: BoundMethod, real_bound: f64) -> Self {
        BoundResult {
            method,
            real_bound,
            rows: real_bound.floor() as u64,
            diagnostics: BTreeMap::new(),
        }
    }

    /// An exact-search bound whose result is already an integer.
    pub(crate) fn from_search(method: BoundMethod, rows: u64) -> Self {
        BoundResult {
            method,
            real_bound: rows as f64,
            rows,
            diagnostics: BTreeMap::new(),
        }
    }

    /// A minimized real-valued objective; rounded up to a safe integer bound.
    pub(crate) fn from_objective(method: BoundMethod, value: f64) -> Self {
        BoundResult {
            method,
            real_bound: value,
            rows: value.ceil() as u64,
            diagnostics: BTreeMap::new(),
        }
    }

    pub(crate) fn with(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.to_string(), value);
        self
    }
}
