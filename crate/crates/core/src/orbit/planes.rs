//! Full isotropic planes: brute-force enumeration, the two-parameter family
//! in `2U`, and orbits under a generator set.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::form::GramForm;
use crate::isometry::{GeneratorSet, Isometry};
use crate::json;
use crate::matrix::{IntMatrix, LatticeVector};

/// A rank-2 full isotropic sublattice, keyed by the Hermite normal form of
/// its spanning rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropicPlane {
    pub rows: IntMatrix,
    pub normal_form: IntMatrix,
}

impl IsotropicPlane {
    pub fn new(form: &GramForm, u: LatticeVector, v: LatticeVector) -> Result<Self> {
        if !form.is_full_isotropic_plane(&u, &v) {
            return Err(Error::VerificationFailed(format!("<{u}, {v}> is not a full isotropic plane")));
        }
        let rows = IntMatrix::from_rows(vec![u.0, v.0]);
        let normal_form = rows.hermite_normal_form();
        Ok(IsotropicPlane { rows, normal_form })
    }

    /// Key for sublattice equality.
    pub fn key(&self) -> Vec<Vec<BigInt>> {
        self.normal_form.to_rows()
    }

    pub fn same_sublattice(&self, other: &IsotropicPlane) -> bool {
        self.normal_form == other.normal_form
    }

    pub fn image(&self, form: &GramForm, g: &Isometry) -> Result<IsotropicPlane> {
        IsotropicPlane::new(form, g.apply(&self.rows.row_vec(0))?, g.apply(&self.rows.row_vec(1))?)
    }

    pub fn to_json(&self) -> Value {
        json!({ "rows": json::matrix(&self.rows), "normal_form": json::matrix(&self.normal_form) })
    }
}

fn gram_i64(form: &GramForm) -> Option<Vec<Vec<i64>>> {
    form.gram().to_rows().iter().map(|r| r.iter().map(ToPrimitive::to_i64).collect()).collect()
}

/// Every full isotropic plane spanned by two vectors with coordinates in
/// `[-bound, bound]`, sorted by normal form.
pub fn enumerate_isotropic_planes(form: &GramForm, bound: i64) -> Result<Vec<IsotropicPlane>> {
    let n = form.dim();
    let side = (2 * bound + 1) as f64;
    if bound < 1 || side.powi(n as i32) > 5e6 {
        return Err(Error::BudgetExhausted(format!("box of side {side} in rank {n} is out of range")));
    }
    let g = gram_i64(form).ok_or_else(|| Error::BudgetExhausted("Gram entries exceed 64 bits".into()))?;
    let dot = |x: &[i64], y: &[i64]| -> i64 {
        (0..n).map(|i| x[i] * (0..n).map(|j| g[i][j] * y[j]).sum::<i64>()).sum()
    };
    let mut isotropic: Vec<Vec<i64>> = Vec::new();
    let mut coords = vec![-bound; n];
    loop {
        if coords.iter().any(|&c| c != 0) && dot(&coords, &coords) == 0 {
            isotropic.push(coords.clone());
        }
        let mut i = 0;
        while i < n && coords[i] == bound {
            coords[i] = -bound;
            i += 1;
        }
        if i == n {
            break;
        }
        coords[i] += 1;
    }
    let mut found: BTreeMap<Vec<Vec<BigInt>>, IsotropicPlane> = BTreeMap::new();
    for (i, u) in isotropic.iter().enumerate() {
        for v in &isotropic[i + 1..] {
            if dot(u, v) != 0 {
                continue;
            }
            // 2x2 minors must be coprime for the pair to span a full plane.
            let mut g = 0i64;
            for a in 0..n {
                for b in a + 1..n {
                    g = g.gcd(&(u[a] * v[b] - u[b] * v[a]));
                }
            }
            if g != 1 {
                continue;
            }
            let plane = IsotropicPlane::new(form, LatticeVector::from_i64s(u), LatticeVector::from_i64s(v))?;
            found.entry(plane.key()).or_insert(plane);
        }
    }
    Ok(found.into_values().collect())
}

/// `<a·x0 + b·x1, b·y0 − a·y1>` (variant 1) or `<a·x0 + b·y1, b·y0 − a·x1>`
/// (variant 2) in `2U` with basis `(x0, y0, x1, y1)`.
pub fn plane_family_2u(a: &BigInt, b: &BigInt, variant: u8) -> Result<IsotropicPlane> {
    if !a.gcd(b).eq(&BigInt::from(1)) {
        return Err(Error::NotCoprime);
    }
    let z = BigInt::from(0);
    let (u, v) = match variant {
        1 => (vec![a.clone(), z.clone(), b.clone(), z.clone()], vec![z.clone(), b.clone(), z, -a]),
        2 => (vec![a.clone(), z.clone(), z.clone(), b.clone()], vec![z.clone(), b.clone(), -a, z]),
        _ => return Err(Error::Inconsistent(format!("family variant must be 1 or 2, got {variant}"))),
    };
    let form = GramForm::parse("2U").expect("2U parses");
    IsotropicPlane::new(&form, LatticeVector(u), LatticeVector(v))
}

/// All family members with `|a|, |b| ≤ bound`, deduplicated and sorted.
pub fn plane_family_range(bound: i64) -> Vec<IsotropicPlane> {
    let mut out = BTreeMap::new();
    for variant in [1, 2] {
        for a in -bound..=bound {
            for b in -bound..=bound {
                if let Ok(p) = plane_family_2u(&a.into(), &b.into(), variant) {
                    out.entry(p.key()).or_insert(p);
                }
            }
        }
    }
    out.into_values().collect()
}

/// Parameters `(a, b, variant)` exhibiting a plane of `2U` as a family member.
pub fn family_parameters(plane: &IsotropicPlane) -> Option<(BigInt, BigInt, u8)> {
    let reach = plane.normal_form.to_rows().iter().flatten().map(|x| x.abs()).max()?.to_i64()?;
    for variant in [1, 2] {
        for a in -reach..=reach {
            for b in -reach..=reach {
                if let Ok(p) = plane_family_2u(&a.into(), &b.into(), variant) {
                    if p.same_sublattice(plane) {
                        return Some((a.into(), b.into(), variant));
                    }
                }
            }
        }
    }
    None
}

/// A plane in an orbit, with an isometry carrying the start plane onto it.
#[derive(Clone, Debug)]
pub struct PlaneOrbitEntry {
    pub plane: IsotropicPlane,
    pub witness: Isometry,
}

/// Breadth-first orbit of a plane under the generators and their inverses,
/// stopping after `limit` distinct planes. Order is deterministic.
pub fn plane_orbit(gens: &GeneratorSet, start: &IsotropicPlane, limit: usize) -> Result<Vec<PlaneOrbitEntry>> {
    let form = gens.form.clone();
    let gens = gens.with_inverses();
    let mut seen = BTreeMap::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    let first = PlaneOrbitEntry { plane: start.clone(), witness: Isometry::identity(form.clone()) };
    seen.insert(start.key(), ());
    queue.push_back(first.clone());
    out.push(first);
    while let Some(entry) = queue.pop_front() {
        for (_, g) in &gens.generators {
            if out.len() >= limit {
                return Ok(out);
            }
            let plane = entry.plane.image(&form, g)?;
            if seen.insert(plane.key(), ()).is_none() {
                let next = PlaneOrbitEntry { plane, witness: g.compose(&entry.witness)? };
                queue.push_back(next.clone());
                out.push(next);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry::wall_generators;

    fn v(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(c)
    }

    fn two_u() -> GramForm {
        GramForm::parse("2U").unwrap()
    }

    #[test]
    fn bound_one_contains_coordinate_planes() {
        let f = two_u();
        let planes = enumerate_isotropic_planes(&f, 1).unwrap();
        let x0x1 = IsotropicPlane::new(&f, v(&[1, 0, 0, 0]), v(&[0, 0, 1, 0])).unwrap();
        let x0y1 = IsotropicPlane::new(&f, v(&[1, 0, 0, 0]), v(&[0, 0, 0, 1])).unwrap();
        assert!(planes.iter().any(|p| p.same_sublattice(&x0x1)));
        assert!(planes.iter().any(|p| p.same_sublattice(&x0y1)));
    }

    #[test]
    fn rank_two_has_no_planes() {
        let f = GramForm::parse("U").unwrap();
        assert!(enumerate_isotropic_planes(&f, 3).unwrap().is_empty());
    }

    #[test]
    fn family_examples() {
        let f = two_u();
        let p = plane_family_2u(&1.into(), &0.into(), 1).unwrap();
        assert!(p.same_sublattice(&IsotropicPlane::new(&f, v(&[1, 0, 0, 0]), v(&[0, 0, 0, -1])).unwrap()));
        let p = plane_family_2u(&1.into(), &1.into(), 1).unwrap();
        assert!(p.same_sublattice(&IsotropicPlane::new(&f, v(&[1, 0, 1, 0]), v(&[0, 1, 0, -1])).unwrap()));
        let p = plane_family_2u(&0.into(), &1.into(), 1).unwrap();
        assert!(p.same_sublattice(&IsotropicPlane::new(&f, v(&[0, 0, 1, 0]), v(&[0, 1, 0, 0])).unwrap()));
        assert_eq!(plane_family_2u(&2.into(), &4.into(), 1).unwrap_err(), Error::NotCoprime);
    }

    #[test]
    fn brute_force_matches_family() {
        for bound in 1..=3 {
            let brute: Vec<_> = enumerate_isotropic_planes(&two_u(), bound).unwrap().iter().map(IsotropicPlane::key).collect();
            let fam: Vec<_> = plane_family_range(bound).iter().map(IsotropicPlane::key).collect();
            assert_eq!(brute, fam, "bound {bound}");
        }
    }

    #[test]
    fn parameters_are_recovered() {
        let p = plane_family_2u(&3.into(), &(-2).into(), 2).unwrap();
        let (a, b, var) = family_parameters(&p).unwrap();
        assert!(plane_family_2u(&a, &b, var).unwrap().same_sublattice(&p));
    }

    #[test]
    fn orbit_witnesses_map_start() {
        let f = two_u();
        let gens = wall_generators(2).unwrap();
        let start = IsotropicPlane::new(&f, v(&[1, 0, 0, 0]), v(&[0, 0, 1, 0])).unwrap();
        let orbit = plane_orbit(&gens, &start, 30).unwrap();
        assert_eq!(orbit.len(), 30);
        for e in &orbit {
            assert!(start.image(&f, &e.witness).unwrap().same_sublattice(&e.plane));
            assert!(family_parameters(&e.plane).is_some());
        }
    }
}
