use std::process::ExitCode;

use betaforge_core::acceptance::{run_all, AcceptanceConfig};

fn main() -> ExitCode {
    let results = run_all(&AcceptanceConfig::default());
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
