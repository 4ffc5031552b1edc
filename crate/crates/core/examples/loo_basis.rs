//! Local orthogonal observables: the generalized Gell-Mann set, state
//! reconstruction from expectation values, and orthogonal rotations.
//!
//! `cargo run --example loo_basis -- 3`

use covsteer::random::{random_density, random_orthogonal, seeded_rng};
use covsteer::{expectation, gell_mann_loos, linalg, rotate_loos};

fn main() -> covsteer::Result<()> {
    let d: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let set = gell_mann_loos(d)?;
    println!("{} LOOs in dimension {d}", set.len());

    let mut rng = seeded_rng(1);
    let rho = random_density(d, &mut rng);
    let rebuilt = set.reconstruct(&rho)?;
    println!("reconstruction error   {:.2e}", (rebuilt - rho.matrix()).camax());

    // total variance of any LOO set is d - Tr rho^2
    let total: f64 = set
        .iter()
        .map(|o| expectation(&rho, &(o * o)).unwrap() - expectation(&rho, o).unwrap().powi(2))
        .sum();
    println!("sum of variances       {total:.12}");
    println!("d - purity             {:.12}", d as f64 - rho.purity());

    let rotated = rotate_loos(&set, &random_orthogonal(set.len(), &mut rng))?;
    let gram = linalg::trace_product(&rotated.observables()[0], &rotated.observables()[1]);
    println!("rotated set, Tr(O0 O1) {:.2e}", gram.norm());
    Ok(())
}
