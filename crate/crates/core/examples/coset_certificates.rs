//! Certificates that the stabilizer of a finite vector set has infinite index:
//! any number of isometries with pairwise different images of the set.
//!
//!     cargo run --example coset_certificates

use std::sync::Arc;

use unimodular::form::GramForm;
use unimodular::matrix::LatticeVector;
use unimodular::orbit::{coset_certificate, CosetCertificate};

fn main() -> unimodular::error::Result<()> {
    let form = Arc::new(GramForm::parse("<1>+2<-1>")?);
    let s = [LatticeVector::from_i64s(&[3, 1, 1])];
    let cert = coset_certificate(&form, &s, 6)?;
    cert.verify()?;
    for (i, img) in cert.images.iter().enumerate() {
        println!("g{i} . S = {}", img[0]);
    }

    // Certificates round-trip through JSON and can be checked from the Gram matrix alone.
    let json = cert.to_json();
    let back = CosetCertificate::from_json(&json)?;
    back.verify()?;
    println!("\nJSON round trip verified ({} witnesses)", back.len());

    let big = Arc::new(GramForm::parse("<1>+10<-1>")?);
    let mut k = vec![1i64; 11];
    k[0] = 3;
    let k = LatticeVector::from_i64s(&k);
    let cert = coset_certificate(&big, &[k.clone(), k.neg()], 50)?;
    cert.verify()?;
    println!("<1>+10<-1> with S = {{K, -K}}: {} distinct image sets", cert.len());
    Ok(())
}
