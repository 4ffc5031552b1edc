//! Steerability thresholds of the built-in state families.
//!
//! `cargo run --example family_thresholds`

use covsteer::{threshold_scan, Direction, Family, ScanCriterion};

fn main() -> covsteer::Result<()> {
    println!(
        "{:<20} {:<5} {:>10} {:>10} {:>10}",
        "family", "dir", "prop1", "prop2", "best"
    );
    for family in Family::ALL {
        for dir in Direction::BOTH {
            let t = |crit| threshold_scan(family, crit, dir, 0.0, 1.0, 1e-7);
            println!(
                "{:<20} {:<5} {:>10.6} {:>10.6} {:>10.6}",
                family.id(),
                dir.to_string(),
                t(ScanCriterion::Prop1)?,
                t(ScanCriterion::Prop2)?,
                t(ScanCriterion::Best)?
            );
        }
    }
    Ok(())
}
