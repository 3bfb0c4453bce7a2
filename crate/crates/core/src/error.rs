//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Parameter validation failed; the message names the violated constraint.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// An input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Fixed-rows bound: b did not exceed e^-N, so N is too small.
    #[error("b = {b:.6e} is at most e^-N for N = {rows}: too few rows for the bound to apply")]
    FixedRowsBTooSmall { b: f64, rows: u64 },

    /// Fixed-rows bound: b reached 1, so the bound is vacuous.
    #[error("b = {b:.6e} is at least 1 at N = {rows}: the bound is vacuous")]
    FixedRowsBTooLarge { b: f64, rows: u64 },

    /// The instance has more interactions than the configured cap.
    #[error("instance needs {needed} interaction counters, above the cap {cap} (override with CA_LAMBDA_CAP)")]
    CapExceeded { needed: u128, cap: u64 },

    /// An iteration budget ran out before the construction finished.
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// Arithmetic invariants that theory guarantees were violated; indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
