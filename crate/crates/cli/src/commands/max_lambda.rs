use clap::{Parser, ValueEnum};

use ca_core::bounds::{
    max_lambda_fixed_rows_elementary, max_lambda_fixed_rows_lll, max_lambda_fixed_rows_w,
    FixedRowsResult, FixedRowsStatus,
};

use super::fail;

#[derive(Clone, Copy, ValueEnum)]
pub enum Variant {
    W,
    Elementary,
    Lll,
}

#[derive(Parser)]
pub struct Args {
    /// Fixed number of rows
    #[arg(short = 'N', long)]
    pub rows: u64,
    /// Interaction strength
    #[arg(short = 't', long)]
    pub strength: u32,
    /// Number of columns
    #[arg(short = 'k', long)]
    pub columns: u64,
    /// Alphabet size
    #[arg(short = 'v', long)]
    pub alphabet: u32,
    #[arg(long, value_enum, default_value = "w")]
    pub method: Variant,
    /// Emit a JSON object instead of text
    #[arg(long)]
    pub json: bool,
}

pub fn run(args: &Args) -> i32 {
    let result: Result<FixedRowsResult, _> = match args.method {
        Variant::W => {
            max_lambda_fixed_rows_w(args.rows, args.strength, args.columns, args.alphabet)
        }
        Variant::Elementary => {
            max_lambda_fixed_rows_elementary(args.rows, args.strength, args.columns, args.alphabet)
        }
        Variant::Lll => {
            max_lambda_fixed_rows_lll(args.rows, args.strength, args.columns, args.alphabet)
        }
    };
    let result = match result {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let status = match result.status {
        FixedRowsStatus::Proved => "proved",
        FixedRowsStatus::Vacuous => "vacuous",
    };
    if args.json {
        let mut obj = serde_json::Map::new();
        obj.insert("lambda".into(), result.lambda.into());
        obj.insert("status".into(), status.into());
        for (key, value) in &result.diagnostics {
            obj.insert(key.clone(), (*value).into());
        }
        println!("{}", serde_json::Value::Object(obj));
    } else {
        println!("lambda: {} ({status})", result.lambda);
        for (key, value) in &result.diagnostics {
            println!("  {key} = {value}");
        }
    }
    0
}
