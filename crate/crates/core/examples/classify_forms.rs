//! Classify a few unimodular forms and recover their standard representatives.
//!
//!     cargo run --example classify_forms

use unimodular::form::{classify, GramForm};
use unimodular::matrix::IntMatrix;
use unimodular::verify::random_unimodular;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> unimodular::error::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    for desc in ["3U", "<1>+3<-1>", "2U+E8", "U+-E8", "E8", "3<1>"] {
        let form = GramForm::parse(desc)?;
        // Hide the block structure behind a random change of basis.
        let p = random_unimodular(&mut rng, form.dim(), 3 * form.dim(), 2);
        let disguised = GramForm::new(&(&p.transpose() * form.gram()) * &p)?;
        let c = classify(&disguised)?;
        let inv = &c.invariants;
        print!(
            "{desc:>10}: rank {:>2}  b+ {:>2}  b- {:>2}  sigma {:>3}  {:?}",
            inv.rank, inv.b_plus, inv.b_minus, inv.signature, inv.parity
        );
        match (&c.canonical, &c.note) {
            (Some(spec), _) => println!("  -> {spec}"),
            (None, Some(note)) => println!("  ({note})"),
            (None, None) => println!(),
        }
    }

    // Rejected inputs.
    for rows in [&[&[2i64, 1][..], &[1, 2]][..], &[&[1, 2], &[2, 4]]] {
        match GramForm::new(IntMatrix::from_i64(rows)).and_then(|f| classify(&f)) {
            Ok(c) => println!("unexpected: {:?}", c.invariants),
            Err(e) => println!("{rows:?}: {e}"),
        }
    }
    Ok(())
}
