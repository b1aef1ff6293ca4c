//! Reflections that push a vector out of every bounded region.
//!
//!     cargo run --example escape_traces

use std::sync::Arc;

use unimodular::form::GramForm;
use unimodular::matrix::LatticeVector;
use unimodular::orbit::{escape, escape_even, escape_odd};

fn main() -> unimodular::error::Result<()> {
    // Odd case: the last coordinate runs through 1, 3, 17, 99, ...
    let odd = Arc::new(GramForm::parse("2<1>+<-1>")?);
    let trace = escape_odd(&odd, &LatticeVector::from_i64s(&[0, 0, 1]), 6)?;
    trace.verify()?;
    let tracked: Vec<String> = trace.tracked_values().iter().map(ToString::to_string).collect();
    println!("2<1>+<-1>, start (0,0,1): {}", tracked.join(", "));

    // Even case on U+E8: one transition step, then the x-coefficient moves monotonically.
    let even = Arc::new(GramForm::parse("U+E8")?);
    let start = LatticeVector::from_i64s(&[0, 0, 1, 0, 0, 0, 0, 0, 0, 0]);
    let trace = escape_even(&even, &start, 6)?;
    trace.verify()?;
    println!("\nU+E8, start {start}");
    for step in &trace.steps {
        println!("  {:<10} x = {:>4}  y = {:>3}", format!("{:?}", step.kind), step.vector[0], step.vector[1]);
    }

    // Anything else small enough falls back to a greedy search.
    let other = Arc::new(GramForm::parse("U+<1>")?);
    let trace = escape(&other, &LatticeVector::from_i64s(&[1, 0, 1]), 5)?;
    trace.verify()?;
    println!("\nU+<1>, L1 norms: {:?}", trace.vectors().map(|v| v.l1_norm().to_string()).collect::<Vec<_>>());

    println!("\n{}", trace.to_json());
    Ok(())
}
