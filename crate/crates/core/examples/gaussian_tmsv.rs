//! Gaussian steering of two-mode squeezed vacuum, and invariance of the
//! verdict under local squeezing.
//!
//! `cargo run --example gaussian_tmsv`

use covsteer::linalg::RMat;
use covsteer::{prop3, Direction, GaussianCM};

fn squeezer(s: f64) -> RMat {
    RMat::from_row_slice(2, 2, &[s.exp(), 0.0, 0.0, (-s).exp()])
}

fn main() -> covsteer::Result<()> {
    println!(
        "{:>5} {:>5} {:>14} {:>14} {:>8}",
        "r", "dir", "min eig", "squeezed", "steer"
    );
    for r in [0.0, 0.1, 0.25, 0.5, 1.0, 2.0] {
        let cm = GaussianCM::two_mode_squeezed_vacuum(r);
        let local = cm.transformed(&squeezer(0.4), &squeezer(-0.7))?;
        for dir in Direction::BOTH {
            let v = prop3(&cm, dir);
            let w = prop3(&local, dir);
            println!(
                "{r:>5} {:>5} {:>14.6e} {:>14.6e} {:>8}",
                dir.to_string(),
                -v.lhs,
                -w.lhs,
                v.violated
            );
        }
    }
    Ok(())
}
