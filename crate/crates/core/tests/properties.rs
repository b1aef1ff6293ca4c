use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use unimodular::exterior::{functoriality_check, lambda2, lambda2_matrix, random_sl4};
use unimodular::form::{FormSpec, GramForm};
use unimodular::isometry::{
    component_invariant, reflection, reflection_product, spinor_factorization, spinor_norm, wall_generators, GeneratorSet,
    Isometry,
};
use unimodular::matrix::{IntMatrix, LatticeVector};
use unimodular::orbit::{characteristic_family_i64, escape, escape_even, escape_odd, LeadingBlock, StepKind};
use unimodular::topology::{canonical_norm, cy_table, kt_algebra, solve_phi_t};
use unimodular::verify::{random_gl2, random_unimodular};

fn spec() -> impl Strategy<Value = FormSpec> {
    prop_oneof![
        (0usize..8, 0usize..8).prop_filter("nonempty", |(m, n)| m + n > 0).prop_map(|(m, n)| FormSpec::diagonal(m, n)),
        (0usize..6, -2i64..=2).prop_filter("nonempty", |(p, q)| *p > 0 || *q != 0).prop_map(|(p, q)| FormSpec::even(p, q)),
    ]
}

fn word(gens: &GeneratorSet, letters: &[usize]) -> Isometry {
    let all = gens.with_inverses();
    letters.iter().fold(Isometry::identity(gens.form.clone()), |g, &i| {
        g.compose(&all.generators[i % all.len()].1).unwrap()
    })
}

fn three_u_gens() -> GeneratorSet {
    wall_generators(3).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn standard_forms_are_unimodular_with_their_invariants(s in spec()) {
        let f = GramForm::standard(s).unwrap();
        prop_assert_eq!(f.det().abs(), BigInt::from(1));
        let inv = f.invariants().unwrap();
        prop_assert_eq!(inv.rank, s.rank());
        prop_assert_eq!(inv.signature, s.signature());
        prop_assert_eq!(inv.parity, s.parity());
    }

    #[test]
    fn invariants_survive_base_change(s in spec(), seed in any::<u64>()) {
        let f = GramForm::standard(s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_unimodular(&mut rng, f.dim(), 2 * f.dim(), 2);
        let g = GramForm::new(&(&p.transpose() * f.gram()) * &p).unwrap();
        prop_assert_eq!(g.invariants().unwrap(), f.invariants().unwrap());
    }

    #[test]
    fn isometries_preserve_norm_and_characteristic(
        letters in prop::collection::vec(0usize..30, 0..30),
        v in prop::collection::vec(-6i64..=6, 6),
    ) {
        let gens = three_u_gens();
        let g = word(&gens, &letters);
        // Construction re-checks the Gram identity.
        Isometry::new(gens.form.clone(), g.matrix().clone()).unwrap();
        let v = LatticeVector::from_i64s(&v);
        let w = g.apply(&v).unwrap();
        prop_assert_eq!(gens.form.norm(&w).unwrap(), gens.form.norm(&v).unwrap());
        prop_assert_eq!(gens.form.is_characteristic(&w).unwrap(), gens.form.is_characteristic(&v).unwrap());
    }

    #[test]
    fn component_invariant_is_multiplicative(
        a in prop::collection::vec(0usize..30, 0..12),
        b in prop::collection::vec(0usize..30, 0..12),
    ) {
        let gens = three_u_gens();
        let (g, h) = (word(&gens, &a), word(&gens, &b));
        let gh = g.compose(&h).unwrap();
        let prod = component_invariant(&g).unwrap().mul(component_invariant(&h).unwrap());
        prop_assert_eq!(component_invariant(&gh).unwrap(), prod);
    }

    #[test]
    fn spinor_norm_matches_component(letters in prop::collection::vec(0usize..30, 0..16)) {
        let g = word(&three_u_gens(), &letters);
        prop_assert_eq!(spinor_norm(&g).unwrap(), component_invariant(&g).unwrap().spinor_sign());
    }

    #[test]
    fn spinor_factorization_reproduces_the_isometry(letters in prop::collection::vec(0usize..30, 0..10)) {
        let g = word(&three_u_gens(), &letters);
        let gammas = spinor_factorization(&g).unwrap();
        prop_assert_eq!(reflection_product(g.form(), &gammas), g.matrix().to_rational());
    }

    #[test]
    fn reflections_are_involutions(v in prop::collection::vec(-4i64..=4, 4)) {
        let form = Arc::new(GramForm::parse("<1>+3<-1>").unwrap());
        let gamma = LatticeVector::from_i64s(&v);
        // Only some vectors give integral reflections; the rest must be rejected, not mangled.
        if let Ok(r) = reflection(&form, &gamma) {
            prop_assert!(r.compose(&r).unwrap().is_identity());
            prop_assert_eq!(r.apply(&gamma).unwrap(), gamma.neg());
        }
    }

    #[test]
    fn escape_steps_preserve_invariants(v in prop::collection::vec(-8i64..=8, 4)) {
        prop_assume!(v.iter().any(|&x| x != 0));
        let form = Arc::new(GramForm::parse("3<1>+<-1>").unwrap());
        let start = LatticeVector::from_i64s(&v);
        let trace = escape_odd(&form, &start, 12).unwrap();
        trace.verify().unwrap();
        for w in trace.vectors() {
            prop_assert_eq!(form.norm(w).unwrap(), form.norm(&start).unwrap());
            prop_assert_eq!(w.content(), start.content());
        }
        let vals = trace.tracked_values();
        prop_assert!(vals.windows(2).all(|p| p[1].magnitude() > p[0].magnitude()));
    }

    #[test]
    fn even_escape_is_monotone_in_case_one(v in prop::collection::vec(-4i64..=4, 10)) {
        prop_assume!(v.iter().any(|&x| x != 0));
        let form = Arc::new(GramForm::parse("U+E8").unwrap());
        let trace = escape_even(&form, &LatticeVector::from_i64s(&v), 8).unwrap();
        trace.verify().unwrap();
        let mut prev = trace.start.clone();
        for s in &trace.steps {
            if s.kind == StepKind::Monotone {
                let b = &prev[1];
                prop_assert_eq!(&s.vector[1], b);
                if *b > BigInt::from(0) {
                    prop_assert!(s.vector[0] < prev[0]);
                } else {
                    prop_assert!(s.vector[0] > prev[0]);
                }
            }
            prev = s.vector.clone();
        }
    }

    #[test]
    fn generic_escape_traces_verify_when_found(v in prop::collection::vec(-3i64..=3, 3)) {
        prop_assume!(v.iter().any(|&x| x != 0));
        let form = Arc::new(GramForm::parse("U+<-1>").unwrap());
        if let Ok(trace) = escape(&form, &LatticeVector::from_i64s(&v), 6) {
            trace.verify().unwrap();
        }
    }

    #[test]
    fn characteristic_families_have_the_right_norm(k in -5i64..=5, count in 1usize..=20, odd in any::<bool>(), tail in 0u8..3) {
        let lead = if odd { LeadingBlock::TwoPlusTwoMinus } else { LeadingBlock::TwoU };
        let tail = match tail {
            0 => None,
            1 => Some(GramForm::parse("E8").unwrap()),
            _ => Some(GramForm::parse("<1>").unwrap()),
        };
        let fam = characteristic_family_i64(lead, tail.as_ref(), k, count).unwrap();
        fam.verify().unwrap();
        prop_assert_eq!(fam.vectors.len(), count);
        let sigma = fam.form.invariants().unwrap().signature;
        prop_assert_eq!(fam.target_norm.clone(), BigInt::from(sigma + 8 * k));
    }

    #[test]
    fn exterior_square_is_a_homomorphism_into_the_identity_component(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = random_sl4(&mut ChaCha8Rng::seed_from_u64(s1), 10);
        let b = random_sl4(&mut ChaCha8Rng::seed_from_u64(s2), 10);
        prop_assert!(functoriality_check(&a, &b).unwrap());
        let r = lambda2(&a).unwrap();
        prop_assert!(r.gram_preserved);
        prop_assert_eq!(r.component, Some(unimodular::isometry::ComponentInvariant::IDENTITY));
        prop_assert_eq!(lambda2_matrix(&a.neg()).unwrap(), r.output);
    }

    #[test]
    fn phi_t_solves_for_every_gl2(seed in any::<u64>(), lambda in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3])) {
        let t = random_gl2(&mut ChaCha8Rng::seed_from_u64(seed));
        solve_phi_t(lambda, &t).unwrap().verify().unwrap();
    }
}

#[test]
fn kt_gram_is_two_u() {
    let two_u = GramForm::parse("2U").unwrap();
    for lambda in [-3, -2, -1, 1, 2, 3] {
        assert_eq!(kt_algebra(lambda).unwrap().h2_gram, *two_u.gram());
    }
}

#[test]
fn calabi_yau_rows_are_consistent() {
    for row in cy_table() {
        assert!(row.is_consistent(), "{}", row.label);
        assert_eq!(canonical_norm(row.chi, row.sigma), 0, "{}", row.label);
    }
}

#[test]
fn identity_matrix_is_its_own_exterior_square() {
    assert!(lambda2_matrix(&IntMatrix::identity(4)).unwrap().is_identity());
}
