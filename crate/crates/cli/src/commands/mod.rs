pub mod bounds;
pub mod construct;
pub mod max_lambda;
pub mod sweep;
pub mod verify;

use ca_core::Error;

/// Maps core errors onto the documented exit codes.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::BudgetExhausted(_) => 3,
        _ => 2,
    }
}

pub fn fail(err: &Error) -> i32 {
    eprintln!("error: {err}");
    exit_code(err)
}
