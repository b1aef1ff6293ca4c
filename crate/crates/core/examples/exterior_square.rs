//! SL(4, Z) acting on the exterior square, which carries the form 3U.
//!
//!     cargo run --example exterior_square

use unimodular::exterior::{self, lambda2, non_realizability_replay};
use unimodular::isometry::component_invariant;

fn main() -> unimodular::error::Result<()> {
    for (word, a) in exterior::base_preimages() {
        let r = lambda2(&a)?;
        let hit = r.output == *exterior::word(word).matrix();
        println!("{word:>7}: preserved {}, matches word {hit}, component {:?}", r.gram_preserved, r.component);
    }

    let failing = exterior::relation_suite().into_iter().filter(|r| !r.holds).count();
    println!("\nrelations failing: {failing}");

    for w in ["n3", "s3", "n3 s3"] {
        println!("{w:>6} has component {:?}", component_invariant(&exterior::word(w))?);
    }
    // Errors out if any sampled exterior square leaves the identity component.
    exterior::index_lower_bound_certificate(200, 1)?;
    println!("200 random exterior squares all lie in the identity component");

    let trace = non_realizability_replay("n3")?;
    println!("\nwhy n3 has no preimage (branch a11 = {}):", trace.branches[0].a11);
    for step in &trace.branches[0].steps {
        println!("  [{}] {:<14} {:<28} => {}", step.step, step.relation, step.reduced, step.derived);
    }
    Ok(())
}
