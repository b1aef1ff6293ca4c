//! Two ways to tell the components of the isometry group apart.
//!
//!     cargo run --example spinor_norms

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use unimodular::isometry::{component_invariant, spinor_factorization, spinor_norm, wall_generators};
use unimodular::verify::random_word;

fn main() -> unimodular::error::Result<()> {
    let gens = wall_generators(3)?;
    println!("{:<5} {:>7} {:>8} {:>7}", "gen", "det", "eps_+", "spinor");
    for (label, g) in &gens.generators {
        let c = component_invariant(g)?;
        println!("{label:<5} {:>7} {:>8} {:>7}", c.eps_det, c.eps_plus, spinor_norm(g)?);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = random_word(&mut rng, &gens, 6)?;
    let refl = spinor_factorization(&g)?;
    let norms: Vec<String> = refl.iter().map(|v| gens.form.norm(v).unwrap().to_string()).collect();
    println!("\nrandom word factors into {} reflections with norms [{}]", refl.len(), norms.join(", "));
    println!("component {:?}, spinor norm {}", component_invariant(&g)?, spinor_norm(&g)?);
    Ok(())
}
