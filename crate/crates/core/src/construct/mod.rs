//! Constructive procedures, and the array/interaction data model they share
//! with the verifier.
//!
//! Array text format: first line `N k v t lambda`, then N lines of k
//! space-separated symbols. Round trips are byte-exact.

mod density;
mod graph;
mod moser_tardos;
mod two_stage;

pub use density::density_construct;
pub use graph::{build_incompatibility_graph, greedy_color, IncompatibilityGraph};
pub use moser_tardos::{moser_tardos_construct, moser_tardos_repair};
pub use two_stage::{
    two_stage_coloring_construct, two_stage_coloring_construct_with, two_stage_naive_construct,
    ColoringConfig,
};

use std::io::{BufRead, Write};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::domain::CAParams;
use crate::error::{Error, Result};

/// An N x k symbol matrix over {0..v-1} together with its parameters; the
/// `lambda` field records the coverage index the array is meant to certify.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageArray {
    pub params: CAParams,
    n_rows: usize,
    cells: Vec<u16>,
}

impl CoverageArray {
    pub fn new(params: CAParams, n_rows: usize, cells: Vec<u16>) -> Result<Self> {
        params.validate()?;
        let k = usize::try_from(params.k)
            .map_err(|_| Error::InvalidParams("k exceeds the address space".into()))?;
        if cells.len() != n_rows * k {
            return Err(Error::InvalidParams(format!(
                "cell buffer holds {} entries, expected {} rows x {} columns",
                cells.len(),
                n_rows,
                k
            )));
        }
        if let Some(bad) = cells.iter().find(|&&c| u32::from(c) >= params.v) {
            return Err(Error::InvalidParams(format!(
                "symbol {bad} is outside the alphabet 0..{}",
                params.v
            )));
        }
        Ok(CoverageArray {
            params,
            n_rows,
            cells,
        })
    }

    pub fn rows(&self) -> usize {
        self.n_rows
    }

    pub fn columns(&self) -> usize {
        self.params.k as usize
    }

    pub fn get(&self, row: usize, col: usize) -> u16 {
        self.cells[row * self.columns() + col]
    }

    pub fn row(&self, row: usize) -> &[u16] {
        let k = self.columns();
        &self.cells[row * k..(row + 1) * k]
    }

    pub(crate) fn cells_mut(&mut self) -> &mut [u16] {
        &mut self.cells
    }

    pub(crate) fn push_row(&mut self, row: &[u16]) {
        debug_assert_eq!(row.len(), self.columns());
        self.cells.extend_from_slice(row);
        self.n_rows += 1;
    }

    pub fn write_text<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(
            out,
            "{} {} {} {} {}",
            self.n_rows, self.params.k, self.params.v, self.params.t, self.params.lambda
        )?;
        let k = self.columns();
        for r in 0..self.n_rows {
            let mut line = String::with_capacity(2 * k);
            for c in 0..k {
                if c > 0 {
                    line.push(' ');
                }
                line.push_str(&self.cells[r * k + c].to_string());
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(input: &mut R) -> Result<Self> {
        let mut header = String::new();
        if input.read_line(&mut header)? == 0 {
            return Err(Error::Parse("empty input".into()));
        }
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(Error::Parse(format!(
                "header must be `N k v t lambda`, got {} fields",
                fields.len()
            )));
        }
        let parse = |s: &str, name: &str| -> Result<u64> {
            s.parse()
                .map_err(|_| Error::Parse(format!("bad {name} value {s:?}")))
        };
        let n_rows = parse(fields[0], "N")? as usize;
        let k = parse(fields[1], "k")?;
        let v = parse(fields[2], "v")?;
        let t = parse(fields[3], "t")?;
        let lambda = parse(fields[4], "lambda")?;
        let params = CAParams::new(
            u32::try_from(t).map_err(|_| Error::Parse("t out of range".into()))?,
            k,
            u32::try_from(v).map_err(|_| Error::Parse("v out of range".into()))?,
            u32::try_from(lambda).map_err(|_| Error::Parse("lambda out of range".into()))?,
        )
        .map_err(|e| Error::Parse(e.to_string()))?;
        let mut cells = Vec::with_capacity(n_rows * k as usize);
        let mut line = String::new();
        for r in 0..n_rows {
            line.clear();
            if input.read_line(&mut line)? == 0 {
                return Err(Error::Parse(format!(
                    "expected {n_rows} rows, input ended at row {r}"
                )));
            }
            let mut count = 0;
            for tok in line.split_whitespace() {
                let sym: u16 = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad symbol {tok:?} in row {r}")))?;
                cells.push(sym);
                count += 1;
            }
            if count != k as usize {
                return Err(Error::Parse(format!(
                    "row {r} has {count} symbols, expected {k}"
                )));
            }
        }
        CoverageArray::new(params, n_rows, cells).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// A t-way interaction: t (column, symbol) pairs, strictly increasing by
/// column.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interaction {
    entries: Vec<(usize, u16)>,
}

impl Interaction {
    pub fn new(entries: Vec<(usize, u16)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParams(
                "interaction needs at least one entry".into(),
            ));
        }
        if !entries.windows(2).all(|w| w[0].0 < w[1].0) {
            return Err(Error::InvalidParams(
                "interaction columns must be strictly increasing".into(),
            ));
        }
        Ok(Interaction { entries })
    }

    pub fn entries(&self) -> &[(usize, u16)] {
        &self.entries
    }

    /// Compatible means every shared column carries the same symbol, so the
    /// two interactions can live in one row.
    pub fn compatible(&self, other: &Interaction) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            let (ca, va) = self.entries[i];
            let (cb, vb) = other.entries[j];
            if ca == cb {
                if va != vb {
                    return false;
                }
                i += 1;
                j += 1;
            } else if ca < cb {
                i += 1;
            } else {
                j += 1;
            }
        }
        true
    }

    /// Does `row` realize this interaction?
    pub fn realized_by(&self, row: &[u16]) -> bool {
        self.entries.iter().all(|&(c, s)| row[c] == s)
    }
}

/// Fills N x k cells uniformly from the alphabet, row-major, one draw per
/// cell. The draw order is part of the determinism contract.
pub(crate) fn random_cells<R: Rng>(params: &CAParams, n_rows: u64, rng: &mut R) -> Vec<u16> {
    let k = params.k as usize;
    let total = n_rows as usize * k;
    let mut cells = Vec::with_capacity(total);
    for _ in 0..total {
        cells.push(rng.gen_range(0..params.v) as u16);
    }
    cells
}

/// A uniformly random N x k array from a seeded generator; a fixed seed gives
/// a bit-identical array.
pub fn random_array(params: &CAParams, n_rows: u64, seed: u64) -> Result<CoverageArray> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = random_cells(params, n_rows, &mut rng);
    CoverageArray::new(*params, n_rows as usize, cells)
}

/// Stacks a verified index-1 covering array `lambda` times; every interaction
/// covered once per copy is covered `lambda` times in the stack.
pub fn juxtapose(base: &CoverageArray, lambda: u32) -> Result<CoverageArray> {
    if lambda < 1 {
        return Err(Error::InvalidParams("juxtapose needs lambda >= 1".into()));
    }
    let report = crate::verify::coverage_report(base)?;
    if report.min_coverage < 1 {
        return Err(Error::Domain(
            "juxtapose base does not cover every interaction at least once".into(),
        ));
    }
    let mut params = base.params;
    params.lambda = lambda;
    let mut cells = Vec::with_capacity(base.cells.len() * lambda as usize);
    for _ in 0..lambda {
        cells.extend_from_slice(&base.cells);
    }
    CoverageArray::new(params, base.n_rows * lambda as usize, cells)
}
