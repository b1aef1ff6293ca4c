//! Isotropic planes of 2U: brute force against the closed-form family, and
//! the orbit of <x0, x1> under the wall generators.
//!
//!     cargo run --example isotropic_planes

use unimodular::form::GramForm;
use unimodular::isometry::wall_generators;
use unimodular::matrix::LatticeVector;
use unimodular::orbit::{enumerate_isotropic_planes, family_parameters, plane_family_range, plane_orbit, IsotropicPlane};

fn main() -> unimodular::error::Result<()> {
    let form = GramForm::parse("2U")?;
    for bound in 1..=4 {
        let brute = enumerate_isotropic_planes(&form, bound)?;
        let family = plane_family_range(bound);
        let same = brute.iter().map(IsotropicPlane::key).eq(family.iter().map(IsotropicPlane::key));
        println!("bound {bound}: {:>3} planes, family agrees: {same}", brute.len());
    }

    let start = IsotropicPlane::new(&form, LatticeVector::from_i64s(&[1, 0, 0, 0]), LatticeVector::from_i64s(&[0, 0, 1, 0]))?;
    println!("\norbit of <x0, x1>:");
    for entry in plane_orbit(&wall_generators(2)?, &start, 12)? {
        let rows = entry.plane.normal_form.to_rows();
        let (a, b, variant) = family_parameters(&entry.plane).expect("orbit stays in the family");
        println!("  {:?} {:?}   (a, b) = ({a}, {b}), variant {variant}", rows[0], rows[1]);
    }
    Ok(())
}
