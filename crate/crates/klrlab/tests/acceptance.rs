//! The acceptance suite: one PASS/FAIL line per criterion with its time and
//! budget. Exits with a failure status if any criterion fails.

use std::process::ExitCode;

use klrlab::acceptance::{run_all, CRITERIA};

fn main() -> ExitCode {
    let report = run_all();
    assert_eq!(report.criteria.len(), CRITERIA);
    println!("\nacceptance: {} criteria", report.criteria.len());
    for c in &report.criteria {
        println!("{}", c.line());
    }
    let failed = report.criteria.iter().filter(|c| !c.pass).count();
    println!("acceptance result: {}. {} passed; {failed} failed\n", if report.pass { "ok" } else { "FAILED" }, CRITERIA - failed);
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
