//! Infinite families of characteristic vectors of a fixed norm `σ + 8k`.
//!
//! The leading block is either `2U` or `2<1> + 2<-1>`; everything else lives
//! in an optional tail `L`, which is padded with a characteristic vector of
//! `L` (zero when `L` is even). In the odd block the vectors are
//! `a·p1 + b·p2 + c·q1 + b·q2` with norm `a² − c²`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::form::{FormSpec, GramForm};
use crate::json;
use crate::matrix::LatticeVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeadingBlock {
    /// `2U` with basis `(x0, y0, x1, y1)`.
    TwoU,
    /// `2<1> + 2<-1>` with basis `(p1, p2, q1, q2)`.
    TwoPlusTwoMinus,
}

impl LeadingBlock {
    pub fn form(self) -> GramForm {
        let spec = match self {
            LeadingBlock::TwoU => FormSpec::even(2, 0),
            LeadingBlock::TwoPlusTwoMinus => FormSpec::diagonal(2, 2),
        };
        GramForm::standard(spec).expect("leading blocks are nonempty")
    }
}

#[derive(Clone, Debug)]
pub struct CharacteristicFamily {
    pub form: Arc<GramForm>,
    pub k: BigInt,
    pub target_norm: BigInt,
    pub vectors: Vec<LatticeVector>,
}

impl CharacteristicFamily {
    /// Checks norm, characteristic status and pairwise distinctness.
    pub fn verify(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for v in &self.vectors {
            if v.is_zero() || self.form.norm(v)? != self.target_norm || !self.form.is_characteristic(v)? {
                return Err(Error::VerificationFailed(format!("{v} is not a characteristic vector of norm {}", self.target_norm)));
            }
            if !seen.insert(v) {
                return Err(Error::VerificationFailed(format!("{v} repeats")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "form": json::form(&self.form),
            "k": json::int(&self.k),
            "target_norm": json::int(&self.target_norm),
            "vectors": self.vectors.iter().map(json::vector).collect::<Vec<_>>(),
        })
    }
}

/// `count` distinct characteristic vectors of norm `σ + 8k` in `leading ⊕ tail`.
pub fn characteristic_family(
    leading: LeadingBlock,
    tail: Option<&GramForm>,
    k: &BigInt,
    count: usize,
) -> Result<CharacteristicFamily> {
    if count == 0 {
        return Err(Error::Inconsistent("family size must be at least 1".into()));
    }
    let lead = leading.form();
    let (form, pad, sigma, shift) = match tail {
        None => (lead, Vec::new(), BigInt::zero(), BigInt::zero()),
        Some(l) => {
            let inv = l.invariants()?;
            let w = l.characteristic_vector()?;
            let sigma = BigInt::from(inv.signature);
            // Q(w) ≡ σ(L) mod 8 for every characteristic w.
            let (shift, rem) = (&sigma - l.norm(&w)?).div_rem(&BigInt::from(8));
            debug_assert!(rem.is_zero());
            (lead.direct_sum(l), w.0, sigma, shift)
        }
    };
    let k_lead = k + &shift;
    let mut vectors = Vec::with_capacity(count);
    let two = BigInt::from(2);
    for i in 0..count {
        let idx = BigInt::from(i as u64);
        let head: [BigInt; 4] = match leading {
            LeadingBlock::TwoU => {
                // Q = 8(ab + cd) with (a, b, c, d) = (a, k, 1 − a, k).
                let a = &idx + 1;
                [&two * &a, &two * &k_lead, &two * (BigInt::one() - &a), &two * &k_lead]
            }
            LeadingBlock::TwoPlusTwoMinus => {
                let odd: BigInt = &two * &idx + 1;
                if k_lead.is_zero() {
                    [odd.clone(), BigInt::one(), odd, BigInt::one()]
                } else {
                    let t = k_lead.trailing_zeros().expect("nonzero");
                    let r = &k_lead >> t;
                    let p = BigInt::one() << (t + 1);
                    [&p + &r, odd.clone(), &p - &r, odd]
                }
            }
        };
        let mut coords = head.to_vec();
        coords.extend(pad.iter().cloned());
        vectors.push(LatticeVector(coords));
    }
    let target_norm = &sigma + BigInt::from(8) * k;
    let fam = CharacteristicFamily { form: Arc::new(form), k: k.clone(), target_norm, vectors };
    debug_assert!(fam.verify().is_ok());
    Ok(fam)
}

/// [`characteristic_family`] with a machine-sized `k`.
pub fn characteristic_family_i64(
    leading: LeadingBlock,
    tail: Option<&GramForm>,
    k: i64,
    count: usize,
) -> Result<CharacteristicFamily> {
    characteristic_family(leading, tail, &BigInt::from(k), count)
}

/// Norm of the leading-block vector alone, for cross-checking against `8k`.
pub fn leading_norm(leading: LeadingBlock, v: &LatticeVector) -> BigInt {
    let c = &v.0;
    match leading {
        LeadingBlock::TwoU => BigInt::from(2) * (&c[0] * &c[1] + &c[2] * &c[3]),
        LeadingBlock::TwoPlusTwoMinus => {
            &c[0] * &c[0] + &c[1] * &c[1] - &c[2] * &c[2] - &c[3] * &c[3]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(c)
    }

    #[test]
    fn two_u_example() {
        let fam = characteristic_family_i64(LeadingBlock::TwoU, None, 1, 3).unwrap();
        assert_eq!(fam.vectors[1], v(&[4, 2, -2, 2]));
        assert_eq!(fam.target_norm, BigInt::from(8));
        fam.verify().unwrap();
    }

    #[test]
    fn odd_block_example() {
        let fam = characteristic_family_i64(LeadingBlock::TwoPlusTwoMinus, None, 1, 4).unwrap();
        assert_eq!(fam.vectors[0], v(&[3, 1, 1, 1]));
        assert_eq!(fam.vectors[1], v(&[3, 3, 1, 3]));
        fam.verify().unwrap();
    }

    #[test]
    fn zero_k_families() {
        let fam = characteristic_family_i64(LeadingBlock::TwoU, None, 0, 10).unwrap();
        assert_eq!(fam.vectors.len(), 10);
        fam.verify().unwrap();
        let fam = characteristic_family_i64(LeadingBlock::TwoPlusTwoMinus, None, 0, 10).unwrap();
        assert_eq!(fam.vectors[2], v(&[5, 1, 5, 1]));
        fam.verify().unwrap();
    }

    #[test]
    fn all_k_with_tails() {
        let tails = [None, Some(GramForm::parse("E8").unwrap()), Some(GramForm::parse("<1>").unwrap()),
            Some(GramForm::parse("3<-1>").unwrap()), Some(GramForm::parse("(-E8)+<1>").unwrap())];
        for lead in [LeadingBlock::TwoU, LeadingBlock::TwoPlusTwoMinus] {
            for tail in &tails {
                for k in -5..=5 {
                    let fam = characteristic_family_i64(lead, tail.as_ref(), k, 20).unwrap();
                    fam.verify().unwrap_or_else(|e| panic!("{lead:?} {tail:?} {k}: {e}"));
                    // Oracle: the Gram evaluation agrees with the closed form.
                    let sigma = fam.form.invariants().unwrap().signature;
                    for w in &fam.vectors {
                        assert_eq!(fam.form.norm(w).unwrap(), BigInt::from(sigma + 8 * k));
                    }
                }
            }
        }
    }

    #[test]
    fn large_power_of_two() {
        let k = BigInt::one() << 80;
        let fam = characteristic_family(LeadingBlock::TwoPlusTwoMinus, None, &k, 2).unwrap();
        fam.verify().unwrap();
        assert_eq!(leading_norm(LeadingBlock::TwoPlusTwoMinus, &fam.vectors[0]), BigInt::from(8) * k);
    }

    #[test]
    fn empty_family_rejected() {
        assert!(characteristic_family_i64(LeadingBlock::TwoU, None, 1, 0).is_err());
    }
}
