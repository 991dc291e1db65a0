// Runs without the libtest harness so the criterion lines are always shown.

use std::process::ExitCode;

use holoshannon::acceptance::{run_acceptance, timing_failures, DEFAULT_SEED};

fn main() -> ExitCode {
    let (report, timings) = run_acceptance(DEFAULT_SEED);
    for c in &report.criteria {
        println!("{}", c.line());
    }
    println!("suite time: {:.2}s", timings.total);
    let slow = timing_failures(&timings);
    for s in &slow {
        println!("[SLOW] {s}");
    }
    let failed: Vec<_> = report.criteria.iter().filter(|c| !c.passed).map(|c| c.id).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
    }
    if failed.is_empty() && slow.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
