//! Resampling construction: start from a uniform random array at the
//! local-lemma row count, then repeatedly resample every column of any t-set
//! that is not fully lambda-covered until no such set remains.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::lll_exact_min;
use crate::construct::{random_cells, CoverageArray};
use crate::domain::CAParams;
use crate::error::{Error, Result};
use crate::verify::ColumnSubsets;

/// Lexicographic scan over column t-sets, restarted after every resample;
/// sets are resampled column-major across all rows. Returns the number of
/// resample operations performed.
fn repair_with_rng<R: Rng>(
    array: &mut CoverageArray,
    rng: &mut R,
    max_resamples: u64,
) -> Result<u64> {
    let params = array.params;
    let t = params.t as usize;
    let k = array.columns();
    let v = params.v;
    let vt = (v as u64).pow(params.t) as usize;
    let lambda = u64::from(params.lambda);
    let n = array.rows();
    let mut counts = vec![0u64; vt];
    let mut resamples = 0u64;

    'scan: loop {
        for cols in ColumnSubsets::new(k, t) {
            counts.iter_mut().for_each(|c| *c = 0);
            for r in 0..n {
                let row = array.row(r);
                let mut rank = 0usize;
                for &c in &cols {
                    rank = rank * v as usize + row[c] as usize;
                }
                counts[rank] += 1;
            }
            if counts.iter().any(|&c| c < lambda) {
                if resamples >= max_resamples {
                    let failing = ColumnSubsets::new(k, t)
                        .filter(|cols| {
                            let mut cnt = vec![0u64; vt];
                            for r in 0..n {
                                let row = array.row(r);
                                let mut rank = 0usize;
                                for &c in cols {
                                    rank = rank * v as usize + row[c] as usize;
                                }
                                cnt[rank] += 1;
                            }
                            cnt.iter().any(|&c| c < lambda)
                        })
                        .count();
                    return Err(Error::BudgetExhausted(format!(
                        "resample budget {max_resamples} spent with {failing} column sets still deficient"
                    )));
                }
                let cells = array.cells_mut();
                for &c in &cols {
                    for r in 0..n {
                        cells[r * k + c] = rng.gen_range(0..v) as u16;
                    }
                }
                resamples += 1;
                continue 'scan;
            }
        }
        return Ok(resamples);
    }
}

/// Resamples an existing array in place until it is lambda-covered; an
/// already-satisfying array performs zero resamples.
pub fn moser_tardos_repair(
    array: &mut CoverageArray,
    seed: u64,
    max_resamples: u64,
) -> Result<u64> {
    array.params.validate()?;
    array.params.check_cap()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    repair_with_rng(array, &mut rng, max_resamples)
}

/// Full construction: a random array with the local-lemma row count, then
/// resampling until every t-set is fully covered.
pub fn moser_tardos_construct(
    params: &CAParams,
    seed: u64,
    max_resamples: u64,
) -> Result<CoverageArray> {
    params.validate()?;
    params.check_cap()?;
    let n = lll_exact_min(params)?.rows;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = random_cells(params, n, &mut rng);
    let mut array = CoverageArray::new(*params, n as usize, cells)?;
    repair_with_rng(&mut array, &mut rng, max_resamples)?;
    Ok(array)
}
