//! Runs the full acceptance suite and prints one line per criterion.
//! Built with `harness = false` so the table shows up in plain `cargo test` output.

use qzw::verify::{run_all, VerifyConfig};

fn main() {
    let results = run_all(&VerifyConfig::default());
    println!("acceptance: {} criteria", results.len());
    for r in &results {
        println!("{}", r.line());
    }
    let failed: Vec<_> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    println!("acceptance: {} passed, {} failed {:?}", results.len() - failed.len(), failed.len(), failed);
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
