use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::Parser;
use rayon::prelude::*;

use ca_core::{BoundMethod, CAParams};

use super::{exit_code, fail};
use crate::commands::bounds::evaluate;

/// CSV columns in canonical order with the method behind each one.
const COLUMNS: [(&str, BoundMethod); 10] = [
    ("slj_no_sum_no_W", BoundMethod::SljUpperElementary),
    ("slj_no_sum_with_W", BoundMethod::SljUpperW),
    ("slj_with_sum", BoundMethod::SljExactMin),
    ("lll_no_sum_no_W", BoundMethod::LllUpperElementary),
    ("lll_no_sum_with_W", BoundMethod::LllUpperW),
    ("lll_with_sum", BoundMethod::LllExactMin),
    (
        "two_stage_no_sum_no_W",
        BoundMethod::TwoStageGeneralElementary,
    ),
    ("two_stage_no_sum_with_W", BoundMethod::TwoStageGeneralW),
    ("two_stage_with_sum", BoundMethod::TwoStageExactMin),
    ("two_stage_coloring", BoundMethod::ColoringBoundMin),
];

#[derive(Parser)]
pub struct Args {
    /// Interaction strength
    #[arg(short = 't', long)]
    pub strength: u32,
    /// Alphabet size
    #[arg(short = 'v', long)]
    pub alphabet: u32,
    /// Coverage index
    #[arg(short = 'l', long = "lambda")]
    pub lambda: u32,
    #[arg(long)]
    pub k_start: u64,
    #[arg(long)]
    pub k_end: u64,
    #[arg(long, default_value_t = 1)]
    pub k_step: u64,
    /// Method tags to include (defaults to every CSV column)
    #[arg(long = "methods", value_delimiter = ',')]
    pub methods: Vec<String>,
    /// Output CSV path
    #[arg(short = 'o', long = "out")]
    pub out: PathBuf,
}

pub fn run(args: &Args) -> i32 {
    if args.k_step == 0 || args.k_end < args.k_start {
        eprintln!("error: empty k range");
        return 2;
    }
    let selected: Vec<(&str, BoundMethod)> = if args.methods.is_empty() {
        COLUMNS.to_vec()
    } else {
        let mut chosen = Vec::new();
        for (name, method) in COLUMNS {
            if args.methods.iter().any(|m| m == method.tag() || m == name) {
                chosen.push((name, method));
            }
        }
        if chosen.len() != args.methods.len() {
            let known: Vec<&str> = COLUMNS.iter().map(|(_, m)| m.tag()).collect();
            eprintln!(
                "error: unknown or duplicate method in {:?} (known: {known:?})",
                args.methods
            );
            return 2;
        }
        chosen
    };
    // validate on the first grid point before doing any work
    if let Err(e) = CAParams::new(
        args.strength,
        args.k_start.max(args.strength as u64),
        args.alphabet,
        args.lambda,
    ) {
        return fail(&e);
    }

    let ks: Vec<u64> = (args.k_start..=args.k_end)
        .step_by(args.k_step as usize)
        .collect();
    let rows: Result<Vec<(u64, Vec<u64>)>, ca_core::Error> = ks
        .par_iter()
        .map(|&k| {
            let params = CAParams::new(args.strength, k, args.alphabet, args.lambda)?;
            let mut values = Vec::with_capacity(selected.len());
            for (_, method) in &selected {
                values.push(evaluate(&params, *method)?.rows);
            }
            Ok((k, values))
        })
        .collect();
    let rows = match rows {
        Ok(rows) => rows,
        Err(e) => return fail(&e),
    };

    let file = match File::create(&args.out) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: cannot write {}: {e}", args.out.display());
            return 2;
        }
    };
    let mut out = BufWriter::new(file);
    let mut write_all = || -> std::io::Result<()> {
        let header: Vec<&str> = selected.iter().map(|(name, _)| *name).collect();
        writeln!(out, "k,{}", header.join(","))?;
        for (k, values) in &rows {
            let cells: Vec<String> = values.iter().map(u64::to_string).collect();
            writeln!(out, "{k},{}", cells.join(","))?;
        }
        out.flush()
    };
    if let Err(e) = write_all() {
        eprintln!("error: cannot write {}: {e}", args.out.display());
        return exit_code(&ca_core::Error::Io(e));
    }
    println!("wrote {} rows to {}", rows.len(), args.out.display());
    0
}
