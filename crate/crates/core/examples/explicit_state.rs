//! Analyze a density matrix read from a JSON file with every discrete
//! criterion, printing the text report and the JSON report.
//!
//! `cargo run --example explicit_state -- examples/data/singlet.json`

use covsteer::{read_explicit_state, run_analysis, AnalysisConfig, InputSource};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/singlet.json").to_string());
    let state = read_explicit_state(&std::fs::read_to_string(&path)?)?;
    let report = run_analysis(&AnalysisConfig::for_input(InputSource::Explicit { label: path, state }))?;
    println!("{}", report.to_text());
    println!("{}", report.to_json());
    Ok(())
}
