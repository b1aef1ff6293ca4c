use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::form::is_primitive;
use crate::isometry::GeneratorSet;
use crate::json;
use crate::matrix::LatticeVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitProbe {
    /// Reached vectors in lexicographic order.
    pub vectors: BTreeSet<LatticeVector>,
    /// Some generator image left the coefficient box.
    pub truncated: bool,
}

/// Breadth-first closure of `start` under the generators, never leaving the
/// box `|coord| ≤ bound`.
pub fn orbit_bfs(gens: &GeneratorSet, start: &LatticeVector, bound: &BigInt) -> Result<OrbitProbe> {
    if start.dim() != gens.form.dim() {
        return Err(Error::DimensionMismatch { expected: gens.form.dim(), got: start.dim() });
    }
    if start.is_zero() {
        return Err(Error::ZeroVector);
    }
    if start.sup_norm() > *bound {
        return Err(Error::Inconsistent("coefficient bound is below the start vector".into()));
    }
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    let mut truncated = false;
    seen.insert(start.clone());
    queue.push_back(start.clone());
    while let Some(v) = queue.pop_front() {
        for (_, g) in &gens.generators {
            let w = g.apply(&v)?;
            if w.0.iter().any(|c| c.abs() > *bound) {
                truncated = true;
                continue;
            }
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    Ok(OrbitProbe { vectors: seen, truncated })
}

/// Empirical reachability among primitive vectors of a given norm and type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitivityReport {
    pub norm: BigInt,
    pub characteristic: bool,
    pub bound: BigInt,
    pub candidates: Vec<LatticeVector>,
    pub reached: Vec<LatticeVector>,
    pub unreached: Vec<LatticeVector>,
    pub truncated: bool,
}

impl TransitivityReport {
    pub fn all_reached(&self) -> bool {
        self.unreached.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "norm": json::int(&self.norm),
            "characteristic": self.characteristic,
            "bound": json::int(&self.bound),
            "candidates": self.candidates.len(),
            "reached": self.reached.iter().map(json::vector).collect::<Vec<_>>(),
            "unreached": self.unreached.iter().map(json::vector).collect::<Vec<_>>(),
            "truncated": self.truncated,
        })
    }
}

/// Runs an orbit BFS (generators plus inverses) from the lexicographically
/// first candidate. Failing to reach a candidate inside the box is not a
/// refutation of transitivity.
pub fn transitivity_probe(
    gens: &GeneratorSet,
    norm: &BigInt,
    characteristic: bool,
    bound: i64,
) -> Result<TransitivityReport> {
    let form = &gens.form;
    let n = form.dim();
    let side = (2 * bound + 1) as f64;
    if side.powi(n as i32) > 5e6 {
        return Err(Error::BudgetExhausted("candidate box too large".into()));
    }
    let mut candidates = Vec::new();
    let mut coords = vec![-bound; n];
    loop {
        let v = LatticeVector::from_i64s(&coords);
        if !v.is_zero()
            && is_primitive(&v)?
            && form.norm(&v)? == *norm
            && form.is_characteristic(&v)? == characteristic
        {
            candidates.push(v);
        }
        // odometer
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
    candidates.sort();
    let bound_big = BigInt::from(bound);
    let Some(first) = candidates.first() else {
        return Ok(TransitivityReport {
            norm: norm.clone(),
            characteristic,
            bound: bound_big,
            candidates,
            reached: Vec::new(),
            unreached: Vec::new(),
            truncated: false,
        });
    };
    let probe = orbit_bfs(&gens.with_inverses(), first, &bound_big)?;
    let (reached, unreached): (Vec<_>, Vec<_>) =
        candidates.iter().cloned().partition(|c| probe.vectors.contains(c));
    Ok(TransitivityReport {
        norm: norm.clone(),
        characteristic,
        bound: bound_big,
        candidates,
        reached,
        unreached,
        truncated: probe.truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry::wall_generators;

    fn v(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(c)
    }

    #[test]
    fn hyperbolic_plane_orbit_of_x() {
        let gens = wall_generators(1).unwrap();
        for bound in [1, 3, 10] {
            let probe = orbit_bfs(&gens, &v(&[1, 0]), &BigInt::from(bound)).unwrap();
            let expected: BTreeSet<_> = [v(&[1, 0]), v(&[0, 1]), v(&[-1, 0]), v(&[0, -1])].into_iter().collect();
            assert_eq!(probe.vectors, expected);
            assert!(!probe.truncated);
        }
    }

    #[test]
    fn empty_generator_set_is_a_fixed_point() {
        let gens = GeneratorSet::new(wall_generators(2).unwrap().form);
        let start = v(&[3, -1, 0, 2]);
        let probe = orbit_bfs(&gens, &start, &BigInt::from(3)).unwrap();
        assert_eq!(probe.vectors.into_iter().collect::<Vec<_>>(), vec![start]);
    }

    #[test]
    fn alpha_moves_x0_to_x0_plus_x1() {
        let gens = wall_generators(2).unwrap();
        let probe = orbit_bfs(&gens, &v(&[1, 0, 0, 0]), &BigInt::from(5)).unwrap();
        assert!(probe.vectors.contains(&v(&[1, 0, 1, 0])));
        assert!(probe.vectors.contains(&v(&[0, 0, 1, 0])));
        assert!(probe.vectors.contains(&v(&[-1, 0, 0, 0])));
    }

    #[test]
    fn probe_on_isotropic_primitive_vectors() {
        let gens = wall_generators(2).unwrap();
        let report = transitivity_probe(&gens, &BigInt::from(0), false, 3).unwrap();
        assert!(report.candidates.contains(&v(&[1, 0, 0, 0])));
        assert!(report.reached.contains(&v(&[1, 0, 0, 0])));
        assert!(report.reached.contains(&v(&[0, 0, 1, 0])));
        assert!(report.reached.contains(&v(&[-1, 0, 0, 0])));
    }

    #[test]
    fn probe_with_no_candidates_is_empty() {
        let gens = wall_generators(2).unwrap();
        // Characteristic vectors of 2U are divisible by 2, never primitive.
        let report = transitivity_probe(&gens, &BigInt::from(0), true, 2).unwrap();
        assert!(report.candidates.is_empty() && report.reached.is_empty() && report.unreached.is_empty());
    }

    #[test]
    fn zero_start_rejected() {
        let gens = wall_generators(1).unwrap();
        assert_eq!(orbit_bfs(&gens, &v(&[0, 0]), &BigInt::from(1)).unwrap_err(), Error::ZeroVector);
    }
}
