//! Covariance matrix of a two-qubit Werner state in the Gell-Mann LOO basis,
//! split into local blocks A, B and the cross-correlation block C.
//!
//! `cargo run --example covariance_blocks -- 0.7`

use covsteer::{canonical_blocks, linalg, Family};

fn main() -> covsteer::Result<()> {
    let p: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.7);
    let state = Family::Werner2.state(p)?;
    let blocks = canonical_blocks(&state)?;
    println!("werner-2 at p = {p}");
    println!("A ={:.6}", blocks.a);
    println!("B ={:.6}", blocks.b);
    println!("C ={:.6}", blocks.c);
    println!("||C||_tr          {:.9}", linalg::trace_norm(&blocks.c));
    println!("Tr A, Tr B        {:.9}, {:.9}", blocks.trace_a(), blocks.trace_b());
    println!("kernel residual   {:.2e}", blocks.kernel_residual());
    println!(
        "min eig of gamma  {:.3e}",
        linalg::symmetric_eigenvalues(&blocks.assembled())[0]
    );
    Ok(())
}
