//! One-cell-at-a-time derandomization: fix each cell to the symbol that
//! minimizes the expected number of finally-deficient interactions, assuming
//! all unfixed cells stay uniform random. The expectation starts below 1 at
//! the union-bound row count and never increases, so the finished integer
//! count of deficient interactions is 0.

use crate::bounds::slj_exact_min;
use crate::construct::CoverageArray;
use crate::domain::CAParams;
use crate::error::{Error, Result};
use crate::verify::ColumnSubsets;

struct InteractionState {
    count: u32,
    alive: bool,
    // per-row scratch
    conflicted: bool,
    unfixed: u8,
}

/// `table[j] = P(Bin(m, p) < j)` for j in 0..=lambda.
fn lower_tail_table(m: u64, lambda: u32, p: f64) -> Vec<f64> {
    let mut table = vec![0.0; lambda as usize + 1];
    let ln_pmf0 = m as f64 * (-p).ln_1p();
    let mut pmf = ln_pmf0.exp();
    let ratio = p / (1.0 - p);
    for j in 0..lambda as usize {
        table[j + 1] = table[j] + pmf;
        if (j as u64) < m {
            pmf *= (m - j as u64) as f64 / (j as f64 + 1.0) * ratio;
        } else {
            pmf = 0.0;
        }
    }
    table
}

/// Deterministic density construction with at most the union-bound row
/// count; ties pick the smallest symbol, so `_seed` never enters.
pub fn density_construct(params: &CAParams, _seed: u64) -> Result<CoverageArray> {
    params.validate()?;
    params.check_cap()?;
    let n_budget = slj_exact_min(params)?.rows;
    let t = params.t as usize;
    let k = params.k as usize;
    let v = params.v;
    let vt = (v as u64).pow(params.t) as usize;
    let lambda = params.lambda;
    let p = (-(f64::from(params.t) * f64::from(v).ln())).exp();

    let subsets: Vec<Vec<usize>> = ColumnSubsets::new(k, t).collect();
    // (subset index, position of the column within it) for each column
    let mut by_col: Vec<Vec<(u32, u8)>> = vec![Vec::new(); k];
    for (si, cols) in subsets.iter().enumerate() {
        for (pos, &c) in cols.iter().enumerate() {
            by_col[c].push((si as u32, pos as u8));
        }
    }
    // symbol required at subset position `pos` by the interaction `rank`
    let digit = |rank: usize, pos: u8| -> u16 {
        let shift = vt / (v as usize).pow(u32::from(pos) + 1);
        ((rank / shift) % v as usize) as u16
    };
    let mut states: Vec<InteractionState> = (0..subsets.len() * vt)
        .map(|_| InteractionState {
            count: 0,
            alive: true,
            conflicted: false,
            unfixed: t as u8,
        })
        .collect();
    let mut alive_count = states.len();

    // v^-u for u unfixed columns
    let q_of: Vec<f64> = (0..=t).map(|u| f64::from(v).powi(-(u as i32))).collect();
    let mut cells: Vec<u16> = Vec::with_capacity(n_budget as usize * k);
    let mut rows_built = 0usize;

    for r in 0..n_budget {
        if alive_count == 0 {
            break;
        }
        let remaining = n_budget - r - 1;
        let table = lower_tail_table(remaining, lambda, p);
        let tail = |j: i64| -> f64 {
            if j <= 0 {
                0.0
            } else {
                table[j as usize]
            }
        };
        let mut expectation = 0.0;
        for s in states.iter_mut() {
            if !s.alive {
                continue;
            }
            s.conflicted = false;
            s.unfixed = t as u8;
            let need = i64::from(lambda) - i64::from(s.count);
            expectation += p * tail(need - 1) + (1.0 - p) * tail(need);
        }
        if r == 0 && expectation >= 1.0 {
            return Err(Error::Internal(format!(
                "initial deficiency expectation {expectation} is not below 1"
            )));
        }

        for col_subsets in &by_col {
            let mut best_symbol = 0u16;
            let mut best_delta = f64::INFINITY;
            for x in 0..v as u16 {
                let mut delta = 0.0;
                for &(si, pos) in col_subsets {
                    let base = si as usize * vt;
                    for rank in 0..vt {
                        let s = &states[base + rank];
                        if !s.alive || s.conflicted {
                            continue;
                        }
                        let need = i64::from(lambda) - i64::from(s.count);
                        let q = q_of[s.unfixed as usize];
                        let old = q * tail(need - 1) + (1.0 - q) * tail(need);
                        let new = if digit(rank, pos) == x {
                            let q2 = q * f64::from(v);
                            q2 * tail(need - 1) + (1.0 - q2) * tail(need)
                        } else {
                            tail(need)
                        };
                        delta += new - old;
                    }
                }
                if delta < best_delta {
                    best_delta = delta;
                    best_symbol = x;
                }
            }
            for &(si, pos) in col_subsets {
                let base = si as usize * vt;
                for rank in 0..vt {
                    let s = &mut states[base + rank];
                    if !s.alive || s.conflicted {
                        continue;
                    }
                    if digit(rank, pos) == best_symbol {
                        s.unfixed -= 1;
                    } else {
                        s.conflicted = true;
                    }
                }
            }
            let next = expectation + best_delta;
            // conditional-expectation guarantee, up to float noise
            if next > expectation + 1e-9 * (1.0 + expectation) {
                return Err(Error::Internal(format!(
                    "deficiency expectation rose from {expectation} to {next}"
                )));
            }
            expectation = next;
            cells.push(best_symbol);
        }

        for s in states.iter_mut() {
            if s.alive && !s.conflicted && s.unfixed == 0 {
                s.count += 1;
                if s.count >= lambda {
                    s.alive = false;
                    alive_count -= 1;
                }
            }
        }
        rows_built = r as usize + 1;
    }

    if alive_count != 0 {
        return Err(Error::Internal(format!(
            "{alive_count} interactions still deficient after the full row budget"
        )));
    }
    CoverageArray::new(*params, rows_built, cells)
}
