//! Invariant cohomology of the Kodaira-Thurston nilmanifold and lifts of
//! GL(2, Z) to its automorphisms.
//!
//!     cargo run --example kodaira_thurston

use unimodular::matrix::IntMatrix;
use unimodular::topology::{kodaira_dimension, kt_algebra, kt_infinite_index_witness, solve_phi_t, KodairaInput};

fn main() -> unimodular::error::Result<()> {
    let alg = kt_algebra(1)?;
    println!("H2 Gram: {:?}", alg.h2_gram.to_rows());
    let img = alg.wedge_image()?;
    for (product, class) in &img.products {
        println!("  {product:<6} -> {class}");
    }

    let t = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
    let phi = solve_phi_t(1, &t)?;
    phi.verify()?;
    println!("\nlift of T = [[2,1],[1,1]]: {}", phi.to_json());

    let cert = kt_infinite_index_witness(8)?;
    cert.verify()?;
    println!("\n{} distinct images of the cup-product plane", cert.images.len());

    println!("\nKodaira dimension by sign of (K.w, K.K):");
    for (kw, k2) in [(-1, 3), (0, 0), (2, 0), (2, 5), (0, 1)] {
        match kodaira_dimension(KodairaInput { k_dot_omega: kw, k_squared: k2, minimal: true }) {
            Ok(k) => println!("  ({kw:>2}, {k2:>2}) -> {k}"),
            Err(e) => println!("  ({kw:>2}, {k2:>2}) -> {e}"),
        }
    }
    Ok(())
}
