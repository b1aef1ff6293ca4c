//! Lower bounds on the index of the stabilizer of a finite vector set.
//!
//! If `g1(S), …, gn(S)` are pairwise distinct, the `gi` lie in pairwise
//! distinct left cosets of the set stabilizer of `S`, so any subgroup
//! preserving `S` has index at least `n`.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::form::GramForm;
use crate::isometry::{reflection, Isometry};
use crate::json;
use crate::matrix::LatticeVector;
use crate::orbit::escape::escape;

#[derive(Clone, Debug)]
pub struct CosetCertificate {
    pub form: Arc<GramForm>,
    pub invariant_set: Vec<LatticeVector>,
    pub witnesses: Vec<Isometry>,
    /// `images[i]` is `witnesses[i]` applied to the invariant set, sorted.
    pub images: Vec<Vec<LatticeVector>>,
}

fn image_set(g: &Isometry, s: &[LatticeVector]) -> Result<Vec<LatticeVector>> {
    let set: BTreeSet<LatticeVector> = s.iter().map(|v| g.apply(v)).collect::<Result<_>>()?;
    Ok(set.into_iter().collect())
}

impl CosetCertificate {
    pub fn len(&self) -> usize {
        self.witnesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witnesses.is_empty()
    }

    /// Re-derives every image from its witness and checks pairwise distinctness.
    pub fn verify(&self) -> Result<()> {
        if self.images.len() != self.witnesses.len() {
            return Err(Error::VerificationFailed("one image set per witness expected".into()));
        }
        let mut seen = BTreeSet::new();
        for (i, (g, img)) in self.witnesses.iter().zip(&self.images).enumerate() {
            Isometry::new(self.form.clone(), g.matrix().clone())?;
            if image_set(g, &self.invariant_set)? != *img {
                return Err(Error::VerificationFailed(format!("image {i} does not match its witness")));
            }
            if !seen.insert(img) {
                return Err(Error::VerificationFailed(format!("image {i} repeats an earlier one")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "form": json::form(&self.form),
            "invariant_set": self.invariant_set.iter().map(json::vector).collect::<Vec<_>>(),
            "witnesses": self.witnesses.iter().map(|g| json::matrix(g.matrix())).collect::<Vec<_>>(),
            "images": self.images.iter().map(|s| s.iter().map(json::vector).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    /// Rebuilds a certificate from its JSON encoding; call [`verify`](Self::verify) to replay it.
    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("missing field {k:?}")));
        let form = Arc::new(json::parse_form(field("form")?)?);
        let list = |k: &str| -> Result<Vec<Value>> {
            field(k)?.as_array().cloned().ok_or_else(|| Error::Parse(format!("{k:?} must be an array")))
        };
        let invariant_set = list("invariant_set")?.iter().map(json::parse_vector).collect::<Result<_>>()?;
        let witnesses = list("witnesses")?
            .iter()
            .map(|m| Isometry::new(form.clone(), json::parse_matrix(m)?))
            .collect::<Result<_>>()?;
        let images = list("images")?
            .iter()
            .map(|s| {
                s.as_array()
                    .ok_or_else(|| Error::Parse("image sets must be arrays".into()))?
                    .iter()
                    .map(json::parse_vector)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(CosetCertificate { form, invariant_set, witnesses, images })
    }
}

/// `n` isometries with pairwise distinct images of `s`, built from prefixes
/// of an escape trace starting at `s[0]`.
pub fn coset_certificate(form: &Arc<GramForm>, s: &[LatticeVector], n: usize) -> Result<CosetCertificate> {
    if s.is_empty() {
        return Err(Error::Inconsistent("invariant set is empty".into()));
    }
    for v in s {
        if v.dim() != form.dim() {
            return Err(Error::DimensionMismatch { expected: form.dim(), got: v.dim() });
        }
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
    }
    let inv = form.invariants()?;
    if !inv.is_indefinite() {
        return Err(Error::Definite("the automorphism group of a definite form is finite"));
    }
    if inv.rank < 3 {
        return Err(Error::UnsupportedShape("rank 2 forms have finite automorphism groups".into()));
    }
    let set: BTreeSet<LatticeVector> = s.iter().cloned().collect();
    let invariant_set: Vec<LatticeVector> = set.into_iter().collect();

    let mut witnesses = vec![Isometry::identity(form.clone())];
    let mut images = vec![invariant_set.clone()];
    let mut steps = 2 * n + 4;
    'grow: while witnesses.len() < n {
        let trace = escape(form, &invariant_set[0], steps)?;
        witnesses.truncate(1);
        images.truncate(1);
        let mut seen: BTreeSet<Vec<LatticeVector>> = images.iter().cloned().collect();
        let mut g = Isometry::identity(form.clone());
        for step in &trace.steps {
            g = reflection(form, &step.gamma)?.compose(&g)?;
            let img = image_set(&g, &invariant_set)?;
            if seen.insert(img.clone()) {
                witnesses.push(g.clone());
                images.push(img);
                if witnesses.len() == n {
                    break 'grow;
                }
            }
        }
        if steps > 16 * n + 64 {
            return Err(Error::BudgetExhausted(format!("only {} distinct images found", witnesses.len())));
        }
        steps *= 2;
    }
    witnesses.truncate(n);
    images.truncate(n);
    Ok(CosetCertificate { form: form.clone(), invariant_set, witnesses, images })
}
