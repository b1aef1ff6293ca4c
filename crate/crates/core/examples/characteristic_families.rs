//! Infinitely many characteristic vectors of each admissible norm.
//!
//!     cargo run --example characteristic_families

use unimodular::form::GramForm;
use unimodular::orbit::{characteristic_family_i64, LeadingBlock};

fn main() -> unimodular::error::Result<()> {
    let e8 = GramForm::parse("E8")?;
    for (lead, tail, name) in [
        (LeadingBlock::TwoU, None, "2U"),
        (LeadingBlock::TwoPlusTwoMinus, None, "2<1>+2<-1>"),
        (LeadingBlock::TwoU, Some(&e8), "2U+E8"),
    ] {
        println!("{name}");
        for k in [-2, 0, 1, 3] {
            let fam = characteristic_family_i64(lead, tail, k, 4)?;
            fam.verify()?;
            let shown: Vec<String> = fam.vectors.iter().map(ToString::to_string).collect();
            println!("  k = {k:>2}, norm {:>3}: {}", fam.target_norm, shown.join("  "));
        }
    }
    Ok(())
}
