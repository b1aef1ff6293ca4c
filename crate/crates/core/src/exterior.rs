//! The exterior square `Λ²: SL(4, Z) → A(3U)`.
//!
//! `H²(T⁴)` has basis `x1 = dt1∧dt2, y1 = dt3∧dt4, x2 = dt1∧dt3,
//! y2 = dt4∧dt2, x3 = dt1∧dt4, y3 = dt2∧dt3` with Gram matrix `3U`.
//! A 4×4 matrix `A` acts on `H¹` by `A(dt_j) = Σ a_ij dt_i`, and the
//! induced matrix on `H²` has entries `p_kl,ij = a_ki a_lj − a_kj a_li`.
//!
//! The image of `Λ²` lies in the identity component of the real orthogonal
//! group, so `n3`, `s3` and `n3 s3` are not in it. This module checks that
//! by sampling, by explicit preimages of generators, and by replaying the
//! symbolic argument that any preimage of these elements must be `±I`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::form::GramForm;
use crate::isometry::{component_invariant, wall_generators, ComponentInvariant, GeneratorSet, Isometry};
use crate::json;
use crate::matrix::IntMatrix;
use crate::poly::{rat, Poly};

/// `(k, l, sign)` with `k < l` (0-based): basis element `r` is `sign · dt_k ∧ dt_l`.
pub const BASIS: [(usize, usize, i64); 6] = [(0, 1, 1), (2, 3, 1), (0, 2, 1), (1, 3, -1), (0, 3, 1), (1, 2, 1)];

/// Names of the six basis elements, in order.
pub const BASIS_NAMES: [&str; 6] = ["x1", "y1", "x2", "y2", "x3", "y3"];

/// `τ = (14)(23)`, 0-based.
pub const TAU: [usize; 4] = [3, 2, 1, 0];

pub fn three_u() -> Arc<GramForm> {
    static F: OnceLock<Arc<GramForm>> = OnceLock::new();
    F.get_or_init(|| Arc::new(GramForm::parse("3U").expect("3U parses"))).clone()
}

/// Gram matrix of the wedge pairing `dt_a∧dt_b · dt_c∧dt_d = ε(a,b,c,d)` on the basis.
pub fn induced_gram() -> IntMatrix {
    let mut g = IntMatrix::zeros(6, 6);
    for (r, &(a, b, s)) in BASIS.iter().enumerate() {
        for (c, &(d, e, t)) in BASIS.iter().enumerate() {
            g[(r, c)] = BigInt::from(s * t * permutation_sign(&[a, b, d, e]));
        }
    }
    g
}

fn permutation_sign(p: &[usize]) -> i64 {
    let mut seen = BTreeSet::new();
    if !p.iter().all(|x| seen.insert(*x)) {
        return 0;
    }
    let mut sign = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// `p_kl,ij = a_ki a_lj − a_kj a_li`.
pub fn minor(a: &IntMatrix, k: usize, l: usize, i: usize, j: usize) -> BigInt {
    &a[(k, i)] * &a[(l, j)] - &a[(k, j)] * &a[(l, i)]
}

/// The 6×6 matrix of `Λ²A` in the basis `(x1, y1, x2, y2, x3, y3)`.
pub fn lambda2_matrix(a: &IntMatrix) -> Result<IntMatrix> {
    if a.nrows() != 4 || a.ncols() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: a.nrows().max(a.ncols()) });
    }
    let mut c = IntMatrix::zeros(6, 6);
    for (r, &(k, l, sr)) in BASIS.iter().enumerate() {
        for (col, &(i, j, sc)) in BASIS.iter().enumerate() {
            c[(r, col)] = BigInt::from(sr * sc) * minor(a, k, l, i, j);
        }
    }
    Ok(c)
}

#[derive(Clone, Debug, Serialize)]
pub struct Lambda2Report {
    #[serde(serialize_with = "ser_matrix")]
    pub input: IntMatrix,
    #[serde(serialize_with = "ser_matrix")]
    pub output: IntMatrix,
    pub gram_preserved: bool,
    /// `None` when the output is not an isometry.
    pub component: Option<ComponentInvariant>,
}

fn ser_matrix<S: serde::Serializer>(m: &IntMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    json::matrix(m).serialize(s)
}

impl Lambda2Report {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

pub fn lambda2(a: &IntMatrix) -> Result<Lambda2Report> {
    let output = lambda2_matrix(a)?;
    let iso = Isometry::new(three_u(), output.clone()).ok();
    let component = iso.as_ref().map(component_invariant).transpose()?;
    Ok(Lambda2Report { input: a.clone(), gram_preserved: iso.is_some(), output, component })
}

/// `Λ²(AB) = Λ²(A) Λ²(B)`.
pub fn functoriality_check(a: &IntMatrix, b: &IntMatrix) -> Result<bool> {
    Ok(lambda2_matrix(&(a * b))? == &lambda2_matrix(a)? * &lambda2_matrix(b)?)
}

/// The four 4×4 matrices whose exterior squares are `n1n2, s1s2, p12n1, α12`.
pub fn base_preimages() -> [(&'static str, IntMatrix); 4] {
    [
        ("n1 n2", IntMatrix::from_i64(&[&[-1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, -1]])),
        ("s1 s2", IntMatrix::from_i64(&[&[0, 0, 0, -1], &[0, 0, 1, 0], &[0, -1, 0, 0], &[1, 0, 0, 0]])),
        ("p12 n1", IntMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 0, 1, 0], &[0, -1, 0, 0], &[0, 0, 0, 1]])),
        ("a12", IntMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 0, 1]])),
    ]
}

/// Wall's generators of `A(3U)` in the basis above.
pub fn generators() -> GeneratorSet {
    static G: OnceLock<GeneratorSet> = OnceLock::new();
    G.get_or_init(|| wall_generators(3).expect("3U generators"))
    .clone()
}

/// Product of a word like `"n1 p12 a12'"`, left to right.
pub fn word(w: &str) -> Isometry {
    let labels: Vec<String> = w.split_whitespace().map(canonical_label).collect();
    generators().word(&labels).unwrap_or_else(|e| panic!("bad word {w:?}: {e}"))
}

/// `p21` is stored as `p12`.
fn canonical_label(t: &str) -> String {
    let (base, inv) = t.strip_suffix('\'').map_or((t, ""), |b| (b, "'"));
    if let Some(rest) = base.strip_prefix('p') {
        let d: Vec<char> = rest.chars().collect();
        if d.len() == 2 && d[0] > d[1] {
            return format!("p{}{}{inv}", d[1], d[0]);
        }
    }
    t.to_string()
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub label: String,
    pub holds: bool,
}

/// Every listed relation of `A(3U)`, instantiated over all distinct index triples.
pub fn relation_suite() -> Vec<RelationCheck> {
    let mut out = Vec::new();
    let mut check = |label: String, lhs: &str, rhs: &str| {
        let holds = word(lhs).matrix() == word(rhs).matrix();
        out.push(RelationCheck { label, holds });
    };
    let id = "n1 n1";
    for i in 1..=3 {
        check(format!("n{i}^2 = 1"), &format!("n{i} n{i}"), id);
        check(format!("s{i}^2 = 1"), &format!("s{i} s{i}"), id);
        for t in 1..=3 {
            check(format!("n{i} s{t} = s{t} n{i}"), &format!("n{i} s{t}"), &format!("s{t} n{i}"));
        }
    }
    for i in 1..=3 {
        for j in 1..=3 {
            if i == j {
                continue;
            }
            check(format!("p{i}{j}^2 = 1"), &format!("p{i}{j} p{i}{j}"), id);
            check(format!("s{i} s{j} = s{j} s{i}"), &format!("s{i} s{j}"), &format!("s{j} s{i}"));
            check(format!("n{i} n{j} = n{j} n{i}"), &format!("n{i} n{j}"), &format!("n{j} n{i}"));
            check(format!("n{i} p{i}{j} = p{i}{j} n{j}"), &format!("n{i} p{i}{j}"), &format!("p{i}{j} n{j}"));
            check(format!("s{i} p{i}{j} = p{i}{j} s{j}"), &format!("s{i} p{i}{j}"), &format!("p{i}{j} s{j}"));
            check(format!("n{i} a{i}{j} = a{i}{j}^-1 n{i}"), &format!("n{i} a{i}{j}"), &format!("a{i}{j}' n{i}"));
            check(format!("n{j} a{i}{j} = a{i}{j}^-1 n{j}"), &format!("n{j} a{i}{j}"), &format!("a{i}{j}' n{j}"));
            check(format!("p{i}{j} a{i}{j} p{i}{j} = a{j}{i}"), &format!("p{i}{j} a{i}{j} p{i}{j}"), &format!("a{j}{i}"));
            let k = 6 - i - j;
            check(format!("p{i}{k} p{i}{j} = p{j}{k} p{i}{k}"), &format!("p{i}{k} p{i}{j}"), &format!("p{j}{k} p{i}{k}"));
            check(format!("n{k} p{i}{j} = p{i}{j} n{k}"), &format!("n{k} p{i}{j}"), &format!("p{i}{j} n{k}"));
            check(format!("s{k} p{i}{j} = p{i}{j} s{k}"), &format!("s{k} p{i}{j}"), &format!("p{i}{j} s{k}"));
            check(format!("n{k} a{i}{j} = a{i}{j} n{k}"), &format!("n{k} a{i}{j}"), &format!("a{i}{j} n{k}"));
            check(format!("s{k} a{i}{j} = a{i}{j} s{k}"), &format!("s{k} a{i}{j}"), &format!("a{i}{j} s{k}"));
            check(format!("p{i}{k} a{i}{j} p{i}{k} = a{k}{j}"), &format!("p{i}{k} a{i}{j} p{i}{k}"), &format!("a{k}{j}"));
        }
    }
    out
}

/// The 192 signed permutation matrices of determinant 1.
fn signed_permutations() -> Vec<IntMatrix> {
    let mut out = Vec::new();
    let perms = permutations(4);
    for p in &perms {
        for signs in 0..16u32 {
            let mut m = IntMatrix::zeros(4, 4);
            for (col, &row) in p.iter().enumerate() {
                m[(row, col)] = BigInt::from(if signs >> col & 1 == 1 { -1 } else { 1 });
            }
            if m.det().is_one() {
                out.push(m);
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug)]
pub struct Preimage {
    pub label: String,
    pub element: Isometry,
    pub preimage: IntMatrix,
}

/// Generators `n_i n_j, s_i s_j, p_ij n_i, α_ij, s_i α_ij s_i, s_j α_ij s_j` of
/// the subgroup `N`, each with an `SL(4, Z)` preimage found among conjugates
/// of the four base matrices by signed permutations, checked through `Λ²`.
pub fn n_subgroup_generators() -> Result<Vec<Preimage>> {
    let mut targets = Vec::new();
    for i in 1..=3 {
        for j in i + 1..=3 {
            targets.push(format!("n{i} n{j}"));
            targets.push(format!("s{i} s{j}"));
        }
    }
    for i in 1..=3 {
        for j in 1..=3 {
            if i != j {
                targets.push(format!("p{i}{j} n{i}"));
                targets.push(format!("a{i}{j}"));
                targets.push(format!("s{i} a{i}{j} s{i}"));
                targets.push(format!("s{j} a{i}{j} s{j}"));
            }
        }
    }
    let conjugators: Vec<(IntMatrix, IntMatrix)> = signed_permutations()
        .into_iter()
        .map(|p| {
            let inv = p.transpose();
            (p, inv)
        })
        .collect();
    let candidates: Vec<(IntMatrix, IntMatrix)> = base_preimages()
        .iter()
        .flat_map(|(_, b)| conjugators.iter().map(move |(p, pi)| &(p * b) * pi))
        .map(|a| {
            let c = lambda2_matrix(&a).expect("4x4");
            (c, a)
        })
        .collect();
    let mut out = Vec::new();
    for label in targets {
        let element = word(&label);
        let preimage = candidates
            .iter()
            .find(|(c, _)| c == element.matrix())
            .map(|(_, a)| a.clone())
            .ok_or_else(|| Error::VerificationFailed(format!("no preimage found for {label}")))?;
        if !preimage.det().is_one() || lambda2_matrix(&preimage)? != *element.matrix() {
            return Err(Error::VerificationFailed(format!("preimage of {label} does not check")));
        }
        out.push(Preimage { label, element, preimage });
    }
    Ok(out)
}

/// Random word of length `len` in the elementary matrices `E_ij(±1)`.
pub fn random_sl4(rng: &mut impl Rng, len: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(4);
    for _ in 0..len {
        let i = rng.gen_range(0..4);
        let mut j = rng.gen_range(0..3);
        if j >= i {
            j += 1;
        }
        let s: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        // Left multiplication by E_ij(s): row_i += s·row_j.
        for c in 0..4 {
            let v = &m[(j, c)] * s;
            m[(i, c)] += v;
        }
    }
    m
}

#[derive(Clone, Debug)]
pub struct IndexCertificate {
    pub seed: u64,
    pub samples: usize,
    pub word_length: usize,
    /// Component values of `I, n3, s3, n3 s3`.
    pub coset_components: Vec<(String, ComponentInvariant)>,
}

impl IndexCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "samples": self.samples,
            "word_length": self.word_length,
            "sample_component": ComponentInvariant::IDENTITY,
            "coset_components": self.coset_components.iter().map(|(l, c)| json!({"element": l, "component": c})).collect::<Vec<_>>(),
            "conclusion": "every sampled image has trivial component while I, n3, s3, n3 s3 have four distinct components; \
                           the image of the exterior square misses the three nontrivial cosets, so the index is at least 4",
        })
    }
}

/// Samples `Λ²` of random `SL(4, Z)` words and evaluates the component
/// invariant on `I, n3, s3, n3 s3`. Fails on any nontrivial sample.
pub fn index_lower_bound_certificate(samples: usize, seed: u64) -> Result<IndexCertificate> {
    if samples == 0 {
        return Err(Error::Inconsistent("at least one sample is required".into()));
    }
    let word_length = 12;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in 0..samples {
        let a = random_sl4(&mut rng, word_length);
        let report = lambda2(&a)?;
        if report.component != Some(ComponentInvariant::IDENTITY) {
            return Err(Error::VerificationFailed(format!("sample {s} has component {:?}", report.component)));
        }
    }
    let coset_components: Vec<(String, ComponentInvariant)> = ["n1 n1", "n3", "s3", "n3 s3"]
        .iter()
        .map(|w| Ok((if *w == "n1 n1" { "I".to_string() } else { w.to_string() }, component_invariant(&word(w))?)))
        .collect::<Result<_>>()?;
    let distinct: BTreeSet<_> = coset_components.iter().map(|(_, c)| *c).collect();
    if distinct.len() != 4 {
        return Err(Error::VerificationFailed("coset representatives do not separate components".into()));
    }
    Ok(IndexCertificate { seed, samples, word_length, coset_components })
}

/// One instantiated relation and what it yields.
#[derive(Clone, Debug, Serialize)]
pub struct ReplayStep {
    pub step: u8,
    pub relation: String,
    pub reduced: String,
    pub derived: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReplayTrace {
    pub target: String,
    pub branches: Vec<ReplayBranch>,
}

/// The propagation under one choice of the sign `a11 = ±1`.
#[derive(Clone, Debug, Serialize)]
pub struct ReplayBranch {
    pub a11: i64,
    pub steps: Vec<ReplayStep>,
    #[serde(serialize_with = "ser_matrix")]
    pub solution: IntMatrix,
    pub image_is_identity: bool,
    pub image_equals_target: bool,
}

impl ReplayTrace {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("trace serializes")
    }
}

const NV: usize = 16;

fn var_a(i: usize, j: usize) -> usize {
    4 * i + j
}

fn a_names() -> Vec<String> {
    (0..16).map(|v| format!("a{}{}", v / 4 + 1, v % 4 + 1)).collect()
}

/// `p_kl,ij` as a polynomial in the 16 entries.
fn p_poly(k: usize, l: usize, i: usize, j: usize) -> Poly {
    let a = |r, c| Poly::var(NV, var_a(r, c));
    &(&a(k, i) * &a(l, j)) - &(&a(k, j) * &a(l, i))
}

/// `p_kl,ij` read off a 6×6 matrix through the basis dictionary, extended by antisymmetry.
fn p_from_matrix(c: &IntMatrix, k: usize, l: usize, i: usize, j: usize) -> BigInt {
    let locate = |a: usize, b: usize| -> Option<(usize, i64)> {
        if a == b {
            return None;
        }
        let (lo, hi, s) = if a < b { (a, b, 1) } else { (b, a, -1) };
        BASIS.iter().position(|&(x, y, _)| (x, y) == (lo, hi)).map(|r| (r, s * BASIS[r].2))
    };
    match (locate(k, l), locate(i, j)) {
        (Some((r, sr)), Some((col, sc))) => BigInt::from(sr * sc) * &c[(r, col)],
        _ => BigInt::zero(),
    }
}

fn delta(a: usize, b: usize) -> i64 {
    (a == b) as i64
}

fn show(i: usize, j: usize) -> String {
    format!("{}{}", i + 1, j + 1)
}

/// Symbolic replay showing that a preimage of `n3`, `s3` or `n3 s3` under
/// `Λ²` would have to be `±I`, whose image is the identity.
pub fn non_realizability_replay(target: &str) -> Result<ReplayTrace> {
    if !["n3", "s3", "n3 s3"].contains(&target) {
        return Err(Error::Inconsistent(format!("replay target must be n3, s3 or n3 s3, got {target:?}")));
    }
    let c = word(target).matrix().clone();
    let names = a_names();
    let mut shared = Vec::new();

    // Step 1: the columns x1, y1, x2, y2 agree with the identity.
    let mut known_p: BTreeMap<(usize, usize, usize, usize), BigInt> = BTreeMap::new();
    for i in 0..4 {
        for j in 0..4 {
            if i == j || j == TAU[i] {
                continue;
            }
            for k in 0..4 {
                for l in 0..4 {
                    let v = p_from_matrix(&c, k, l, i, j);
                    let expected = delta(k, i) * delta(l, j) - delta(k, j) * delta(l, i);
                    if v != BigInt::from(expected) {
                        return Err(Error::VerificationFailed(format!(
                            "target disagrees with the identity at p{},{}",
                            show(k, l),
                            show(i, j)
                        )));
                    }
                    known_p.insert((k, l, i, j), v);
                }
            }
        }
    }
    shared.push(ReplayStep {
        step: 1,
        relation: "p_kl,ij = δ_ki δ_lj − δ_kj δ_li for j ≠ τ(i), τ = (14)(23)".into(),
        reduced: format!("{} values read from the target", known_p.len()),
        derived: "target agrees with the identity on x1, y1, x2, y2".into(),
    });

    // Step 2: R_{i,l,j;i,j} kills a_lj for l ∉ {j, τ(j)}.
    let mut zeros: BTreeMap<usize, BigRational> = BTreeMap::new();
    for j in 0..4 {
        for l in 0..4 {
            if l == j || l == TAU[j] {
                continue;
            }
            let i = (0..4).find(|&i| i != j && i != TAU[j] && i != l).expect("four indices");
            let (k, s) = (i, j);
            // a_lj p_ks,ij − a_sj p_kl,ij + a_kj p_sl,ij, first as an identity in the a's.
            let a = |r, col| Poly::var(NV, var_a(r, col));
            let relation = &(&(&a(l, j) * &p_poly(k, s, i, j)) - &(&a(s, j) * &p_poly(k, l, i, j)))
                + &(&a(k, j) * &p_poly(s, l, i, j));
            if !relation.is_zero() {
                return Err(Error::VerificationFailed("R relation is not a polynomial identity".into()));
            }
            let kp = |k, l| Poly::constant(NV, BigRational::from_integer(known_p[&(k, l, i, j)].clone()));
            let reduced = &(&(&a(l, j) * &kp(k, s)) - &(&a(s, j) * &kp(k, l))) + &(&a(k, j) * &kp(s, l));
            let (v, val) = reduced.solve_linear().ok_or_else(|| {
                Error::VerificationFailed(format!("step 2 did not close: {}", reduced.display_with(&names)))
            })?;
            if v != var_a(l, j) || !val.is_zero() {
                return Err(Error::VerificationFailed("step 2 derived an unexpected value".into()));
            }
            zeros.insert(v, val);
            shared.push(ReplayStep {
                step: 2,
                relation: format!("R_{{{},{},{};{},{}}}", k + 1, l + 1, s + 1, i + 1, j + 1),
                reduced: format!("{} = 0", reduced.display_with(&names)),
                derived: format!("{} = 0", names[v]),
            });
        }
    }

    let mut branches = Vec::new();
    for eps in [1i64, -1] {
        let mut steps = shared.clone();
        let mut values = zeros.clone();
        values.insert(var_a(0, 0), rat(eps));
        // Step 3: P_ij,ij with j ≠ τ(i) reduces to a_ii a_jj = 1.
        let mut pending: Vec<(usize, usize)> =
            (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).filter(|&(i, j)| i < j && j != TAU[i]).collect();
        while !pending.is_empty() {
            let before = pending.len();
            pending.retain(|&(i, j)| {
                let eq = &p_poly(i, j, i, j) - &Poly::int(NV, 1);
                let reduced = eq.substitute_all(&values);
                if reduced.is_zero() {
                    steps.push(ReplayStep {
                        step: 3,
                        relation: format!("P_{},{}", show(i, j), show(i, j)),
                        reduced: "0 = 0".into(),
                        derived: "consistent".into(),
                    });
                    return false;
                }
                let Some((v, val)) = reduced.solve_linear() else {
                    return true;
                };
                steps.push(ReplayStep {
                    step: 3,
                    relation: format!("P_{},{}", show(i, j), show(i, j)),
                    reduced: format!("{} = 0", reduced.display_with(&names)),
                    derived: format!("{} = {}", names[v], val),
                });
                values.insert(v, val);
                false
            });
            if pending.len() == before {
                return Err(Error::VerificationFailed("step 3 did not close".into()));
            }
        }
        // Step 4: P_τ(i)j,ij with j ∉ {i, τ(i)} forces a_τ(i)i = 0.
        for i in 0..4 {
            let j = (0..4).find(|&j| j != i && j != TAU[i]).expect("four indices");
            let eq = &p_poly(TAU[i], j, i, j) - &Poly::int(NV, delta(TAU[i], i) * delta(j, j) - delta(TAU[i], j) * delta(j, i));
            let reduced = eq.substitute_all(&values);
            let (v, val) = reduced.solve_linear().ok_or_else(|| {
                Error::VerificationFailed(format!("step 4 did not close: {}", reduced.display_with(&names)))
            })?;
            if v != var_a(TAU[i], i) {
                return Err(Error::VerificationFailed("step 4 derived an unexpected entry".into()));
            }
            steps.push(ReplayStep {
                step: 4,
                relation: format!("P_{},{}", show(TAU[i], j), show(i, j)),
                reduced: format!("{} = 0", reduced.display_with(&names)),
                derived: format!("{} = {}", names[v], val),
            });
            values.insert(v, val);
        }
        // Step 5: every entry is determined.
        let mut solution = IntMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                let v = values.get(&var_a(i, j)).ok_or_else(|| {
                    Error::VerificationFailed(format!("{} left undetermined", names[var_a(i, j)]))
                })?;
                solution[(i, j)] = v.to_integer();
            }
        }
        let image = lambda2_matrix(&solution)?;
        let image_is_identity = image.is_identity();
        let image_equals_target = image == c;
        steps.push(ReplayStep {
            step: 5,
            relation: "A = a11 I".into(),
            reduced: format!("A = {}", if eps == 1 { "I" } else { "-I" }),
            derived: format!("Λ²A = I ≠ {target}"),
        });
        branches.push(ReplayBranch { a11: eps, steps, solution, image_is_identity, image_equals_target });
    }
    Ok(ReplayTrace { target: target.into(), branches })
}

impl ReplayTrace {
    /// The replay closes with `A = ±I` and an image different from the target.
    pub fn closes(&self) -> bool {
        self.branches.len() == 2
            && self.branches.iter().all(|b| {
                let mut expected = IntMatrix::zeros(4, 4);
                for i in 0..4 {
                    expected[(i, i)] = BigInt::from(b.a11);
                }
                b.image_is_identity && !b.image_equals_target && b.solution == expected
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    #[test]
    fn dictionary_gives_three_u() {
        assert_eq!(induced_gram(), *three_u().gram());
    }

    #[test]
    fn identity_and_base_matrices() {
        assert!(lambda2_matrix(&IntMatrix::identity(4)).unwrap().is_identity());
        let expected = ["n1 n2", "s1 s2", "p12 n1", "a12"];
        for ((_, a), w) in base_preimages().iter().zip(expected) {
            assert_eq!(lambda2_matrix(a).unwrap(), *word(w).matrix(), "{w}");
        }
        // p12 n1 = n2 p12
        assert_eq!(word("p12 n1").matrix(), word("n2 p12").matrix());
    }

    #[test]
    fn antisymmetry_and_sign_of_y2() {
        let a = m(&[&[2, 1, 0, 3], &[1, 1, 0, 0], &[0, 4, 1, 1], &[5, 0, 2, 1]]);
        for (k, l, i, j) in [(0, 1, 2, 3), (3, 1, 0, 2), (1, 3, 1, 3)] {
            assert_eq!(minor(&a, k, l, i, j), -minor(&a, l, k, i, j));
            assert_eq!(minor(&a, k, l, i, j), -minor(&a, k, l, j, i));
        }
        // y2 = dt4∧dt2: the (y2, y2) entry is p_42,42 = p_24,24.
        let c = lambda2_matrix(&a).unwrap();
        assert_eq!(c[(3, 3)], minor(&a, 3, 1, 3, 1));
        assert_eq!(c[(3, 0)], minor(&a, 3, 1, 0, 1));
    }

    #[test]
    fn negation_is_in_the_kernel() {
        let a = m(&[&[1, 2, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, -1], &[0, 0, 0, 1]]);
        assert_eq!(lambda2_matrix(&a).unwrap(), lambda2_matrix(&a.neg()).unwrap());
    }

    #[test]
    fn functorial_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let a = random_sl4(&mut rng, 8);
            let b = random_sl4(&mut rng, 8);
            assert!(functoriality_check(&a, &b).unwrap());
            assert!(functoriality_check(&IntMatrix::identity(4), &b).unwrap());
            let ai = a.inverse_unimodular().unwrap();
            assert!((&lambda2_matrix(&a).unwrap() * &lambda2_matrix(&ai).unwrap()).is_identity());
        }
    }

    #[test]
    fn report_for_non_unimodular_input() {
        let r = lambda2(&m(&[&[2, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]])).unwrap();
        assert!(!r.gram_preserved);
        assert!(r.component.is_none());
        let r = lambda2(&base_preimages()[3].1).unwrap();
        assert_eq!(r.component, Some(ComponentInvariant::IDENTITY));
    }

    #[test]
    fn relations_hold() {
        let suite = relation_suite();
        assert!(suite.len() > 80);
        for r in &suite {
            assert!(r.holds, "{}", r.label);
        }
        assert!(suite.iter().any(|r| r.label == "n1 a12 = a12^-1 n1"));
        assert!(suite.iter().any(|r| r.label == "p12 a12 p12 = a21"));
        assert!(suite.iter().any(|r| r.label == "p13 p12 = p23 p13"));
    }

    #[test]
    fn subgroup_generators_have_preimages() {
        let gens = n_subgroup_generators().unwrap();
        assert_eq!(gens.len(), 30);
        let n1n2 = gens.iter().find(|g| g.label == "n1 n2").unwrap();
        assert_eq!(lambda2_matrix(&n1n2.preimage).unwrap(), lambda2_matrix(&base_preimages()[0].1).unwrap());
        assert!(gens.iter().any(|g| g.label == "a13"));
    }

    #[test]
    fn index_certificate() {
        let cert = index_lower_bound_certificate(200, 1).unwrap();
        let comps: BTreeMap<_, _> = cert.coset_components.iter().cloned().collect();
        assert_eq!(comps["n3 s3"], ComponentInvariant { eps_det: -1, eps_plus: -1 });
        assert_eq!(comps["I"], ComponentInvariant::IDENTITY);
    }

    #[test]
    fn replay_closes_for_all_targets() {
        for t in ["n3", "s3", "n3 s3"] {
            let trace = non_realizability_replay(t).unwrap();
            assert!(trace.closes(), "{t}");
            let step3: Vec<_> = trace.branches[0].steps.iter().filter(|s| s.step == 3).collect();
            assert!(step3.iter().any(|s| s.relation == "P_12,12"));
        }
        assert!(non_realizability_replay("n1").is_err());
        assert_eq!(TAU[0], 3);
        assert_eq!(TAU[1], 2);
    }
}
