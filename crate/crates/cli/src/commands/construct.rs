use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use ca_core::bounds::{coloring_bound_min, lll_exact_min, slj_exact_min, two_stage_exact_min};
use ca_core::construct::{
    density_construct, juxtapose, moser_tardos_construct, random_array,
    two_stage_coloring_construct_with, two_stage_naive_construct, ColoringConfig, CoverageArray,
};
use ca_core::verify::coverage_report;
use ca_core::{CAParams, Error};

use super::fail;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Random,
    Density,
    MoserTardos,
    TwoStage,
    TwoStageColoring,
    Juxtapose,
}

#[derive(Parser)]
pub struct Args {
    /// Interaction strength
    #[arg(short = 't', long)]
    pub strength: u32,
    /// Number of columns
    #[arg(short = 'k', long)]
    pub columns: u64,
    /// Alphabet size
    #[arg(short = 'v', long)]
    pub alphabet: u32,
    /// Coverage index
    #[arg(short = 'l', long = "lambda")]
    pub lambda: u32,
    #[arg(long, value_enum)]
    pub algorithm: Algorithm,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Row count (only for --algorithm random)
    #[arg(short = 'N', long)]
    pub rows: Option<u64>,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_resamples: u64,
    #[arg(long, default_value_t = 50)]
    pub redraws: u32,
    #[arg(long, default_value_t = 20)]
    pub coloring_attempts: u32,
    /// Output array path
    #[arg(short = 'o', long = "out")]
    pub out: PathBuf,
}

/// The analytic bound that sized a construction, for the summary line.
type SizingBound = Option<(&'static str, u64)>;

fn build(args: &Args, params: &CAParams) -> Result<(CoverageArray, SizingBound), Error> {
    match args.algorithm {
        Algorithm::Random => {
            let n = args
                .rows
                .ok_or_else(|| Error::InvalidParams("--algorithm random needs --rows".into()))?;
            Ok((random_array(params, n, args.seed)?, None))
        }
        Algorithm::Density => {
            let bound = slj_exact_min(params)?;
            Ok((
                density_construct(params, args.seed)?,
                Some(("slj_exact", bound.rows)),
            ))
        }
        Algorithm::MoserTardos => {
            let bound = lll_exact_min(params)?;
            Ok((
                moser_tardos_construct(params, args.seed, args.max_resamples)?,
                Some(("lll_exact", bound.rows)),
            ))
        }
        Algorithm::TwoStage => {
            let bound = two_stage_exact_min(params)?;
            Ok((
                two_stage_naive_construct(params, args.seed)?,
                Some(("two_stage_exact", bound.rows)),
            ))
        }
        Algorithm::TwoStageColoring => {
            let bound = coloring_bound_min(params)?;
            let config = ColoringConfig {
                max_redraws: args.redraws,
                max_coloring_attempts: args.coloring_attempts,
            };
            Ok((
                two_stage_coloring_construct_with(params, args.seed, &config)?,
                Some(("two_stage_coloring", bound.rows)),
            ))
        }
        Algorithm::Juxtapose => {
            // an index-1 density array stacked lambda times
            let mut base_params = *params;
            base_params.lambda = 1;
            let base = density_construct(&base_params, args.seed)?;
            let stacked = juxtapose(&base, params.lambda)?;
            let bound = slj_exact_min(&base_params)?;
            Ok((
                stacked,
                Some((
                    "lambda x slj_exact(lambda=1)",
                    bound.rows * u64::from(params.lambda),
                )),
            ))
        }
    }
}

pub fn run(args: &Args) -> i32 {
    let params = match CAParams::new(args.strength, args.columns, args.alphabet, args.lambda) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    let (array, bound) = match build(args, &params) {
        Ok(pair) => pair,
        Err(e) => return fail(&e),
    };
    let file = match File::create(&args.out) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: cannot write {}: {e}", args.out.display());
            return 2;
        }
    };
    let mut writer = BufWriter::new(file);
    if let Err(e) = array.write_text(&mut writer) {
        eprintln!("error: cannot write {}: {e}", args.out.display());
        return 2;
    }
    drop(writer);

    let report = match coverage_report(&array) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let verified = report.min_coverage >= u64::from(params.lambda);
    println!("rows used: {}", array.rows());
    if let Some((name, rows)) = bound {
        println!("analytic bound ({name}): {rows}");
    }
    println!(
        "min coverage: {} (lambda = {})",
        report.min_coverage, params.lambda
    );
    println!("verified: {}", if verified { "yes" } else { "NO" });
    if verified {
        0
    } else if args.algorithm == Algorithm::Random {
        println!("warning: random arrays carry no coverage guarantee");
        0
    } else {
        1
    }
}
