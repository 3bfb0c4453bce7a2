//! Ground-truth coverage certification by exhaustive counting: the oracle
//! every constructor and acceptance test leans on.
//!
//! Counting walks every column t-set and tallies the value tuple of every
//! row, Theta(C(k,t) N t) work and C(k,t) v^t counters; requests above the
//! interaction cap are rejected rather than left to thrash.

use crate::construct::{CoverageArray, Interaction};
use crate::domain::CAParams;
use crate::error::Result;

/// Lexicographic iterator over t-subsets of {0..k-1}.
pub(crate) struct ColumnSubsets {
    k: usize,
    current: Vec<usize>,
    done: bool,
}

impl ColumnSubsets {
    pub(crate) fn new(k: usize, t: usize) -> Self {
        ColumnSubsets {
            k,
            current: (0..t).collect(),
            done: t > k || t == 0,
        }
    }
}

impl Iterator for ColumnSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let t = self.current.len();
        let mut i = t;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] < self.k - t + i {
                self.current[i] += 1;
                for j in i + 1..t {
                    self.current[j] = self.current[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

fn validated_dims(t: u32, k: u64, v: u32) -> Result<CAParams> {
    CAParams::new(t, k, v, 1)
}

/// All C(k,t) v^t t-way interactions in canonical order: column sets
/// lexicographic, value tuples lexicographic within each set.
pub fn enumerate_interactions(t: u32, k: u64, v: u32) -> Result<impl Iterator<Item = Interaction>> {
    let params = validated_dims(t, k, v)?;
    params.check_cap()?;
    let vt = (v as u64).pow(t);
    let t_us = t as usize;
    Ok(ColumnSubsets::new(k as usize, t_us).flat_map(move |cols| {
        (0..vt).map(move |rank| {
            let mut entries = Vec::with_capacity(t_us);
            for (j, &c) in cols.iter().enumerate() {
                let shift = vt / (v as u64).pow(j as u32 + 1);
                entries.push((c, ((rank / shift) % v as u64) as u16));
            }
            Interaction::new(entries).expect("columns are strictly increasing")
        })
    }))
}

/// Exact per-interaction coverage counts for an array.
#[derive(Debug, Clone)]
pub struct CoverageReport {
    pub params: CAParams,
    /// C(k,t) v^t
    pub total_interactions: u64,
    pub min_coverage: u64,
    counts: Vec<u64>,
    /// (global interaction rank, count) for every count below lambda.
    deficient_ranks: Vec<(u64, u64)>,
}

impl CoverageReport {
    pub fn sum_counts(&self) -> u128 {
        self.counts.iter().map(|&c| u128::from(c)).sum()
    }

    pub fn deficient_len(&self) -> usize {
        self.deficient_ranks.len()
    }

    /// Decodes the deficient list as (interaction, count) pairs.
    pub fn deficient(&self) -> Vec<(Interaction, u64)> {
        self.deficient_ranks
            .iter()
            .map(|&(rank, count)| (self.decode(rank), count))
            .collect()
    }

    /// All interactions with their counts, in canonical order.
    pub fn iter_counts(&self) -> impl Iterator<Item = (Interaction, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (self.decode(i as u64), c))
    }

    pub fn count_of(&self, interaction: &Interaction) -> Option<u64> {
        let t = self.params.t as usize;
        if interaction.entries().len() != t {
            return None;
        }
        let cols: Vec<usize> = interaction.entries().iter().map(|e| e.0).collect();
        let subset_rank = combination_rank(&cols, self.params.k)?;
        let vt = (self.params.v as u64).pow(self.params.t);
        let mut value_rank = 0u64;
        for &(_, s) in interaction.entries() {
            if u32::from(s) >= self.params.v {
                return None;
            }
            value_rank = value_rank * self.params.v as u64 + u64::from(s);
        }
        self.counts
            .get((subset_rank * vt + value_rank) as usize)
            .copied()
    }

    fn decode(&self, rank: u64) -> Interaction {
        let vt = (self.params.v as u64).pow(self.params.t);
        let subset_rank = rank / vt;
        let mut value_rank = rank % vt;
        let cols = combination_unrank(subset_rank, self.params.k, self.params.t as usize);
        let mut symbols = vec![0u16; cols.len()];
        for j in (0..cols.len()).rev() {
            symbols[j] = (value_rank % self.params.v as u64) as u16;
            value_rank /= self.params.v as u64;
        }
        let entries = cols.into_iter().zip(symbols).collect();
        Interaction::new(entries).expect("decode produces sorted columns")
    }
}

fn binom_u64(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 1..=r {
        acc = acc * u128::from(n - r + i) / u128::from(i);
    }
    acc as u64
}

/// Lexicographic rank of a sorted column combination.
fn combination_rank(cols: &[usize], k: u64) -> Option<u64> {
    let t = cols.len() as u64;
    let mut rank = 0u64;
    let mut prev: i64 = -1;
    for (i, &c) in cols.iter().enumerate() {
        let c = c as u64;
        if (c as i64) <= prev || c >= k {
            return None;
        }
        for skipped in (prev + 1) as u64..c {
            rank += binom_u64(k - skipped - 1, t - i as u64 - 1);
        }
        prev = c as i64;
    }
    Some(rank)
}

fn combination_unrank(mut rank: u64, k: u64, t: usize) -> Vec<usize> {
    let mut cols = Vec::with_capacity(t);
    let mut next = 0u64;
    for i in 0..t {
        let mut c = next;
        loop {
            let below = binom_u64(k - c - 1, (t - i - 1) as u64);
            if rank < below {
                break;
            }
            rank -= below;
            c += 1;
        }
        cols.push(c as usize);
        next = c + 1;
    }
    cols
}

/// Exact coverage counts by scanning all rows for every column t-set.
pub fn coverage_report(array: &CoverageArray) -> Result<CoverageReport> {
    let params = array.params;
    params.validate()?;
    let total = params.check_cap()?;
    let t = params.t as usize;
    let k = array.columns();
    let v = params.v as u64;
    let vt = v.pow(params.t);
    let mut counts = vec![0u64; total as usize];
    let mut base = 0usize;
    for cols in ColumnSubsets::new(k, t) {
        for r in 0..array.rows() {
            let row = array.row(r);
            let mut rank = 0u64;
            for &c in &cols {
                rank = rank * v + u64::from(row[c]);
            }
            counts[base + rank as usize] += 1;
        }
        base += vt as usize;
    }
    let min_coverage = counts.iter().copied().min().unwrap_or(0);
    let lambda = u64::from(params.lambda);
    let deficient_ranks = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c < lambda)
        .map(|(i, &c)| (i as u64, c))
        .collect();
    Ok(CoverageReport {
        params,
        total_interactions: total,
        min_coverage,
        counts,
        deficient_ranks,
    })
}

/// True iff every interaction is covered at least `params.lambda` times.
pub fn is_ca_lambda(array: &CoverageArray) -> Result<bool> {
    Ok(coverage_report(array)?.min_coverage >= u64::from(array.params.lambda))
}
