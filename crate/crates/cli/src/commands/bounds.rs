use clap::Parser;

use ca_core::bounds as ops;
use ca_core::{BoundMethod, BoundResult, CAParams, Error};

use super::fail;

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
    /// Method tag(s); defaults to every applicable method.
    /// Tags: slj_exact, slj_w, slj_elementary, lll_exact, lll_w,
    /// lll_elementary, two_stage_exact, two_stage_w, two_stage_elementary,
    /// two_stage_l2_w, two_stage_l2_elementary, two_stage_coloring, best
    #[arg(long = "method")]
    pub methods: Vec<String>,
    /// Emit one JSON object per result line
    #[arg(long)]
    pub json: bool,
}

pub fn evaluate(params: &CAParams, method: BoundMethod) -> Result<BoundResult, Error> {
    match method {
        BoundMethod::SljExactMin => ops::slj_exact_min(params),
        BoundMethod::SljUpperW => ops::slj_upper_w(params),
        BoundMethod::SljUpperElementary => ops::slj_upper_elementary(params),
        BoundMethod::LllExactMin => ops::lll_exact_min(params),
        BoundMethod::LllUpperW => ops::lll_upper_w(params),
        BoundMethod::LllUpperElementary => ops::lll_upper_elementary(params),
        BoundMethod::TwoStageL2W => ops::two_stage_l2_w(params),
        BoundMethod::TwoStageL2Elementary => ops::two_stage_l2_elementary(params),
        BoundMethod::TwoStageExactMin => ops::two_stage_exact_min(params),
        BoundMethod::TwoStageGeneralW => ops::two_stage_general_w(params),
        BoundMethod::TwoStageGeneralElementary => ops::two_stage_general_elementary(params),
        BoundMethod::ColoringBoundMin => ops::coloring_bound_min(params),
    }
}

fn print_result(result: &BoundResult, json: bool) {
    if json {
        let mut obj = serde_json::Map::new();
        obj.insert("method".into(), result.method.tag().into());
        obj.insert("rows".into(), result.rows.into());
        obj.insert("real_bound".into(), result.real_bound.into());
        for (key, value) in &result.diagnostics {
            obj.insert(key.clone(), (*value).into());
        }
        println!("{}", serde_json::Value::Object(obj));
    } else {
        let diag: Vec<String> = result
            .diagnostics
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        println!(
            "{}: rows = {}, real = {}{}",
            result.method.tag(),
            result.rows,
            result.real_bound,
            if diag.is_empty() {
                String::new()
            } else {
                format!("  [{}]", diag.join(", "))
            }
        );
    }
}

pub fn run(args: &Args) -> i32 {
    let params = match CAParams::new(args.strength, args.columns, args.alphabet, args.lambda) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    if args.methods.is_empty() {
        // every applicable method; l2 forms drop out when undefined
        for method in BoundMethod::ALL {
            match evaluate(&params, method) {
                Ok(r) => print_result(&r, args.json),
                Err(Error::Domain(_))
                    if matches!(
                        method,
                        BoundMethod::TwoStageL2W | BoundMethod::TwoStageL2Elementary
                    ) => {}
                Err(e) => return fail(&e),
            }
        }
        return 0;
    }
    for tag in &args.methods {
        let result = if tag == "best" {
            ops::best_bound(&params)
        } else {
            match BoundMethod::from_tag(tag) {
                Some(m) => evaluate(&params, m),
                None => {
                    eprintln!("error: unknown method {tag:?}");
                    return 2;
                }
            }
        };
        match result {
            Ok(r) => print_result(&r, args.json),
            Err(e) => return fail(&e),
        }
    }
    0
}
