//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;

use laxkit::checks::{run_all, CheckOptions, CRITERIA};

fn main() -> ExitCode {
    let outcomes = run_all(&CRITERIA, &CheckOptions::default());
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("acceptance: {} passed, {failed} failed", outcomes.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
