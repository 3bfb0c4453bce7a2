use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use clap::Parser;

use ca_core::construct::CoverageArray;
use ca_core::verify::coverage_report;

use super::fail;

#[derive(Parser)]
pub struct Args {
    /// Array file in the `N k v t lambda` text format
    pub input: PathBuf,
    /// Check against this coverage index instead of the file's lambda
    #[arg(short = 'l', long = "lambda")]
    pub lambda: Option<u32>,
}

pub fn run(args: &Args) -> i32 {
    let file = match File::open(&args.input) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.input.display());
            return 2;
        }
    };
    let mut array = match CoverageArray::read_text(&mut BufReader::new(file)) {
        Ok(a) => a,
        Err(e) => return fail(&e),
    };
    if let Some(lambda) = args.lambda {
        array.params.lambda = lambda;
        if let Err(e) = array.params.validate() {
            return fail(&e);
        }
    }
    let report = match coverage_report(&array) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let lambda = u64::from(array.params.lambda);
    let verified = report.min_coverage >= lambda;
    println!("interactions: {}", report.total_interactions);
    println!("min coverage: {}", report.min_coverage);
    println!("deficient (< {lambda}): {}", report.deficient_len());
    println!(
        "verdict: {}",
        if verified {
            "covering array"
        } else {
            "NOT a covering array"
        }
    );
    if verified {
        0
    } else {
        1
    }
}
