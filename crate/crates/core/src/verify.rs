//! Seeded verification suites that combine the modules into replayable
//! JSON reports. Each suite returns named checks; a report passes when
//! every check does.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior;
use crate::form::{canonical_representative, classify, FormSpec, GramForm};
use crate::isometry::{component_invariant, spinor_norm, wall_generators, GeneratorSet, Isometry};
use crate::matrix::{IntMatrix, LatticeVector};
use crate::orbit::{
    characteristic_family_i64, coset_certificate, enumerate_isotropic_planes, escape_even, escape_odd,
    family_parameters, plane_family_range, plane_orbit, transitivity_probe, IsotropicPlane, LeadingBlock, StepKind,
};
use crate::topology::{self, KodairaInput};

/// Named verification targets accepted by [`run`].
pub const TARGETS: [&str; 7] = ["def1.1", "thm2.2", "prop2.4", "lemma2.5", "lemma2.6", "prop4.2", "prop4.3"];

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

impl Check {
    fn new(name: &str, passed: bool, detail: Value) -> Self {
        Check { name: name.into(), passed, detail }
    }

    fn from_result(name: &str, r: Result<Value>) -> Self {
        match r {
            Ok(detail) => Check::new(name, true, detail),
            Err(e) => Check::new(name, false, json!({ "error": e.to_string() })),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub target: String,
    pub status: &'static str,
    pub seed: u64,
    pub version: &'static str,
    pub duration_ms: u128,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    /// The part of the report that is a pure function of `(target, seed)`.
    pub fn payload(&self) -> Value {
        json!({ "target": self.target, "seed": self.seed, "checks": self.checks })
    }
}

/// Runs one target, or every target for `"all"`.
pub fn run(target: &str, seed: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let checks = match target {
        "all" => TARGETS.iter().map(|t| checks_for(t, seed)).collect::<Result<Vec<_>>>()?.concat(),
        t => checks_for(t, seed)?,
    };
    let status = if checks.iter().all(|c| c.passed) { "pass" } else { "fail" };
    Ok(VerificationReport {
        target: target.into(),
        status,
        seed,
        version: env!("CARGO_PKG_VERSION"),
        duration_ms: start.elapsed().as_millis(),
        checks,
    })
}

fn checks_for(target: &str, seed: u64) -> Result<Vec<Check>> {
    Ok(match target {
        "def1.1" => vec![kodaira_table()],
        "thm2.2" => vec![classification(seed, 200)],
        "prop2.4" => vec![characteristic_families(), transitivity_sample()],
        "lemma2.5" => vec![isotropic_planes(5, 10)],
        "lemma2.6" => vec![odd_escape(seed, 100, 20), even_escape(seed, 100, 10), coset_certificates(50)],
        "prop4.2" => vec![
            exterior_square(seed, 1000),
            spinor_consistency(seed, 500),
        ],
        "prop4.3" => vec![kodaira_thurston(seed, 20, 25)],
        other => return Err(Error::Parse(format!("unknown target {other:?}; expected one of {TARGETS:?} or all"))),
    })
}

/// Random unimodular matrix: a product of `steps` elementary operations and swaps.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, steps: usize, bound: i64) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        if rng.gen_ratio(1, 6) {
            m.swap_rows(i, j);
            continue;
        }
        let k = BigInt::from(rng.gen_range(-bound..=bound));
        for c in 0..n {
            let v = &m[(j, c)] * &k;
            m[(i, c)] += v;
        }
    }
    m
}

/// A random indefinite standard spec of rank at most `max_rank`.
pub fn random_indefinite_spec(rng: &mut impl Rng, max_rank: usize) -> FormSpec {
    if rng.gen_bool(0.5) {
        let m = rng.gen_range(1..max_rank);
        let n = rng.gen_range(1..=max_rank - m);
        FormSpec::diagonal(m, n)
    } else {
        let q_max = ((max_rank - 2) / 8) as i64;
        let q = rng.gen_range(-q_max..=q_max);
        let p_max = (max_rank - 8 * q.unsigned_abs() as usize) / 2;
        FormSpec::even(rng.gen_range(1..=p_max), q)
    }
}

pub fn classification(seed: u64, count: usize) -> Check {
    let run = || -> Result<Value> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut failures = Vec::new();
        for _ in 0..count {
            let spec = random_indefinite_spec(&mut rng, 20);
            let base = GramForm::standard(spec)?;
            let p = random_unimodular(&mut rng, spec.rank(), 2 * spec.rank(), 2);
            let g = &(&p.transpose() * base.gram()) * &p;
            let c = classify(&GramForm::new(g)?)?;
            let inv = &c.invariants;
            let ok = inv.rank == spec.rank()
                && inv.signature == spec.signature()
                && inv.parity == spec.parity()
                && c.canonical == Some(spec)
                && canonical_representative(inv)? == base;
            if !ok {
                failures.push(spec.to_string());
            }
        }
        if failures.is_empty() {
            Ok(json!({ "forms": count }))
        } else {
            Err(Error::VerificationFailed(format!("misclassified: {failures:?}")))
        }
    };
    Check::from_result("classification of conjugated standard forms", run())
}

pub fn odd_escape(seed: u64, starts: usize, steps: usize) -> Check {
    let run = || -> Result<Value> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0dd);
        for n in [2usize, 3, 5] {
            let form = Arc::new(GramForm::standard(FormSpec::diagonal(n, 1))?);
            for _ in 0..starts {
                let start = random_nonzero(&mut rng, n + 1, 10);
                let trace = escape_odd(&form, &start, steps)?;
                trace.verify()?;
                let distinct: BTreeSet<_> = trace.steps.iter().map(|s| &s.vector).collect();
                if distinct.len() != steps {
                    return Err(Error::VerificationFailed(format!("repeated vectors from {start}")));
                }
            }
        }
        Ok(json!({ "forms": ["2<1>+<-1>", "3<1>+<-1>", "5<1>+<-1>"], "starts": starts, "steps": steps }))
    };
    Check::from_result("odd escape traces", run())
}

fn random_nonzero(rng: &mut impl Rng, dim: usize, bound: i64) -> LatticeVector {
    loop {
        let v: Vec<i64> = (0..dim).map(|_| rng.gen_range(-bound..=bound)).collect();
        if v.iter().any(|&x| x != 0) {
            return LatticeVector::from_i64s(&v);
        }
    }
}

/// Starts cycle through the three cases: generic, `b = 0`, and `η = 0`.
pub fn even_escape(seed: u64, starts: usize, monotone_steps: usize) -> Check {
    let run = || -> Result<Value> {
        let form = Arc::new(GramForm::parse("U+E8")?);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xe8);
        let mut transitions = 0;
        for s in 0..starts {
            let mut start = random_nonzero(&mut rng, 10, 5);
            match s % 4 {
                1 => start.0[1] = BigInt::zero(),
                2 => (2..10).for_each(|i| start.0[i] = BigInt::zero()),
                _ => {}
            }
            if start.is_zero() {
                start.0[0] = BigInt::from(1);
            }
            let trace = escape_even(&form, &start, monotone_steps + 1)?;
            trace.verify()?;
            let first_monotone = trace.steps.iter().position(|st| st.kind == StepKind::Monotone).unwrap_or(usize::MAX);
            if first_monotone > 1 || trace.steps[first_monotone..].iter().any(|st| st.kind != StepKind::Monotone) {
                return Err(Error::VerificationFailed(format!("{start} needs more than one transition")));
            }
            transitions += first_monotone;
            let mut prev = if first_monotone == 0 { &trace.start } else { &trace.steps[0].vector };
            let b = prev[1].clone();
            let mut count = 0;
            for st in &trace.steps[first_monotone..] {
                let moved = if b.is_positive() { st.vector[0] < prev[0] } else { st.vector[0] > prev[0] };
                if !moved || st.vector[1] != b {
                    return Err(Error::VerificationFailed(format!("x-coefficient not monotone from {start}")));
                }
                prev = &st.vector;
                count += 1;
            }
            if count < monotone_steps {
                return Err(Error::VerificationFailed("too few monotone steps".into()));
            }
        }
        Ok(json!({ "form": "U+E8", "starts": starts, "monotone_steps": monotone_steps, "transition_steps": transitions }))
    };
    Check::from_result("even escape traces", run())
}

pub fn characteristic_families() -> Check {
    let run = || -> Result<Value> {
        let tails = [None, Some(GramForm::parse("E8")?), Some(GramForm::parse("<1>")?)];
        let mut families = 0;
        for lead in [LeadingBlock::TwoU, LeadingBlock::TwoPlusTwoMinus] {
            for tail in &tails {
                for k in -5..=5 {
                    characteristic_family_i64(lead, tail.as_ref(), k, 20)?.verify()?;
                    families += 1;
                }
            }
        }
        Ok(json!({ "families": families, "count": 20, "k_range": [-5, 5] }))
    };
    Check::from_result("characteristic vector families", run())
}

/// Empirical only: failing to connect inside a box does not refute transitivity.
pub fn transitivity_sample() -> Check {
    let run = || -> Result<Value> {
        let gens = wall_generators(2)?;
        let report = transitivity_probe(&gens, &BigInt::zero(), false, 2)?;
        let x0 = LatticeVector::from_i64s(&[1, 0, 0, 0]);
        let x1 = LatticeVector::from_i64s(&[0, 0, 1, 0]);
        let ok = report.reached.contains(&x0) && report.reached.contains(&x1) && report.reached.contains(&x0.neg());
        if !ok {
            return Err(Error::VerificationFailed("x0, x1, -x0 not connected".into()));
        }
        Ok(json!({ "candidates": report.candidates.len(), "reached": report.reached.len(), "unreached": report.unreached.len() }))
    };
    Check::from_result("transitivity probe on isotropic primitive vectors of 2U", run())
}

pub fn isotropic_planes(bound: i64, orbit_members: usize) -> Check {
    let run = || -> Result<Value> {
        let form = GramForm::parse("2U")?;
        let brute: Vec<_> = enumerate_isotropic_planes(&form, bound)?.iter().map(IsotropicPlane::key).collect();
        let family: Vec<_> = plane_family_range(bound).iter().map(IsotropicPlane::key).collect();
        if brute != family {
            return Err(Error::VerificationFailed("brute-force planes differ from the family".into()));
        }
        let start = IsotropicPlane::new(&form, LatticeVector::from_i64s(&[1, 0, 0, 0]), LatticeVector::from_i64s(&[0, 0, 1, 0]))?;
        let orbit = plane_orbit(&wall_generators(2)?, &start, orbit_members)?;
        let members = orbit.iter().filter(|e| family_parameters(&e.plane).is_some()).count();
        if members < orbit_members {
            return Err(Error::VerificationFailed(format!("only {members} family members reached")));
        }
        Ok(json!({ "bound": bound, "planes": brute.len(), "orbit_family_members": members }))
    };
    Check::from_result("isotropic planes of 2U", run())
}

pub fn coset_certificates(n: usize) -> Check {
    let run = || -> Result<Value> {
        let start = Instant::now();
        let small = Arc::new(GramForm::parse("<1>+2<-1>")?);
        let c1 = coset_certificate(&small, &[LatticeVector::from_i64s(&[3, 1, 1])], n)?;
        c1.verify()?;
        let big = Arc::new(GramForm::parse("<1>+10<-1>")?);
        let mut k = vec![1i64; 11];
        k[0] = 3;
        let k = LatticeVector::from_i64s(&k);
        if !big.is_characteristic(&k)? {
            return Err(Error::VerificationFailed("supplied class is not characteristic".into()));
        }
        let c2 = coset_certificate(&big, &[k.clone(), k.neg()], n)?;
        c2.verify()?;
        let elapsed = start.elapsed().as_secs_f64();
        if c1.len() != n || c2.len() != n || elapsed >= 10.0 {
            return Err(Error::VerificationFailed(format!("{} and {} witnesses in {elapsed:.2}s", c1.len(), c2.len())));
        }
        Ok(json!({ "witnesses": n, "forms": ["<1>+2<-1>", "<1>+10<-1>"] }))
    };
    Check::from_result("coset certificates", run())
}

pub fn exterior_square(seed: u64, samples: usize) -> Check {
    let run = || -> Result<Value> {
        for ((_, a), w) in exterior::base_preimages().iter().zip(["n1 n2", "s1 s2", "p12 n1", "a12"]) {
            if exterior::lambda2_matrix(a)? != *exterior::word(w).matrix() {
                return Err(Error::VerificationFailed(format!("base matrix for {w} does not map exactly")));
            }
        }
        let relations = exterior::relation_suite();
        if let Some(bad) = relations.iter().find(|r| !r.holds) {
            return Err(Error::VerificationFailed(format!("relation {} fails", bad.label)));
        }
        let gens = exterior::n_subgroup_generators()?;
        let cert = exterior::index_lower_bound_certificate(samples, seed)?;
        let mut replays = Vec::new();
        for t in ["n3", "s3", "n3 s3"] {
            let trace = exterior::non_realizability_replay(t)?;
            if !trace.closes() {
                return Err(Error::VerificationFailed(format!("replay for {t} does not close")));
            }
            replays.push(trace.to_json());
        }
        Ok(json!({
            "relations": relations,
            "subgroup_generators": gens.iter().map(|g| json!({"element": g.label, "preimage": crate::json::matrix(&g.preimage)})).collect::<Vec<_>>(),
            "index_lower_bound": cert.to_json(),
            "replays": replays,
        }))
    };
    Check::from_result("exterior square onto A(3U)", run())
}

/// Random word in the generators and their inverses.
pub fn random_word(rng: &mut impl Rng, gens: &GeneratorSet, max_len: usize) -> Result<Isometry> {
    let all = gens.with_inverses();
    let len = rng.gen_range(1..=max_len);
    let mut g = Isometry::identity(gens.form.clone());
    for _ in 0..len {
        let (_, h) = &all.generators[rng.gen_range(0..all.len())];
        g = g.compose(h)?;
    }
    Ok(g)
}

pub fn spinor_consistency(seed: u64, words: usize) -> Check {
    let run = || -> Result<Value> {
        let gens = wall_generators(3)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5b1);
        let mut classes = BTreeSet::new();
        for i in 0..words {
            let g = random_word(&mut rng, &gens, 8)?;
            let c = component_invariant(&g)?;
            let s = spinor_norm(&g)?;
            if s != c.spinor_sign() {
                return Err(Error::VerificationFailed(format!("word {i}: spinor norm {s}, component {c:?}")));
            }
            classes.insert(c);
        }
        Ok(json!({ "words": words, "components_seen": classes.len() }))
    };
    Check::from_result("spinor norm agrees with the component invariant", run())
}

pub fn kodaira_thurston(seed: u64, phi_samples: usize, witnesses: usize) -> Check {
    let run = || -> Result<Value> {
        let two_u = GramForm::parse("2U")?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4b7);
        for lambda in [-3, -2, -1, 1, 2, 3] {
            let alg = topology::kt_algebra(lambda)?;
            if alg.h2_gram != *two_u.gram() {
                return Err(Error::VerificationFailed(format!("λ = {lambda}: Gram is not 2U")));
            }
            let img = alg.wedge_image()?;
            let expected = IsotropicPlane::new(&two_u, LatticeVector::from_i64s(&[1, 0, 0, 0]), LatticeVector::from_i64s(&[0, 0, 1, 0]))?;
            if !img.plane.same_sublattice(&expected) {
                return Err(Error::VerificationFailed(format!("λ = {lambda}: cup-product image is not <F1, F3>")));
            }
        }
        for _ in 0..phi_samples {
            let t = random_gl2(&mut rng);
            let lambda = [-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
            topology::solve_phi_t(lambda, &t)?.verify()?;
        }
        let cert = topology::kt_infinite_index_witness(witnesses)?;
        cert.verify()?;
        Ok(json!({ "lambdas": [-3, -2, -1, 1, 2, 3], "phi_samples": phi_samples, "distinct_planes": cert.images.len() }))
    };
    Check::from_result("Kodaira-Thurston cohomology and automorphisms", run())
}

/// Random element of `GL(2, Z)`.
pub fn random_gl2(rng: &mut impl Rng) -> IntMatrix {
    let steps = rng.gen_range(1..8);
    let mut m = random_unimodular(rng, 2, steps, 2);
    if rng.gen_bool(0.5) {
        for c in 0..2 {
            m[(0, c)] = -m[(0, c)].clone();
        }
    }
    m
}

pub fn kodaira_table() -> Check {
    let mut cells = Vec::new();
    let mut ok = true;
    for kw in [-1i64, 0, 1] {
        for k2 in [-1i64, 0, 1] {
            let got = topology::kodaira_dimension(KodairaInput { k_dot_omega: kw, k_squared: k2, minimal: true });
            let expected = if kw < 0 || k2 < 0 {
                Some("-inf")
            } else {
                match (kw, k2) {
                    (0, 0) => Some("0"),
                    (1, 0) => Some("1"),
                    (1, 1) => Some("2"),
                    _ => None,
                }
            };
            let got_str = got.as_ref().ok().map(|k| k.to_string());
            ok &= got_str.as_deref() == expected;
            cells.push(json!({
                "k_dot_omega_sign": kw,
                "k_squared_sign": k2,
                "kodaira": got_str,
                "error": got.err().map(|e| e.to_string()),
            }));
        }
    }
    Check::new("Kodaira dimension sign table", ok, json!({ "cells": cells }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kodaira_target_passes() {
        let r = run("def1.1", 0).unwrap();
        assert!(r.passed());
        assert_eq!(r.checks[0].detail["cells"].as_array().unwrap().len(), 9);
    }

    #[test]
    fn unknown_target() {
        assert!(matches!(run("no-such-target", 0), Err(Error::Parse(_))));
    }

    #[test]
    fn payload_is_reproducible() {
        let a = run("lemma2.5", 3).unwrap();
        let b = run("lemma2.5", 3).unwrap();
        assert_eq!(a.payload(), b.payload());
    }

    #[test]
    fn small_suites_pass() {
        assert!(classification(1, 10).passed);
        assert!(odd_escape(1, 5, 8).passed);
        assert!(even_escape(1, 8, 5).passed);
        assert!(spinor_consistency(1, 20).passed);
    }

    #[test]
    fn random_specs_are_indefinite() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let s = random_indefinite_spec(&mut rng, 20);
            assert!(s.rank() <= 20);
            let f = GramForm::standard(s).unwrap();
            assert!(f.invariants().unwrap().is_indefinite());
        }
    }
}
