//! Four-manifold bookkeeping: Kodaira dimension from the signs of `K·[ω]`
//! and `K·K`, the canonical-class norm, the homological table of symplectic
//! Calabi–Yau surfaces, and the invariant-form cohomology of the
//! Kodaira–Thurston nilmanifold.
//!
//! The nilmanifold is `L\R⁴` for the group law
//! `(x0,y0,z0,t0)(x,y,z,t) = (x0+x, y0+y, z0+z+λ·x0·y, t0+t)` and the lattice
//! `L` generated by the four unit vectors. Invariant coframe:
//! `e1 = dx, e2 = dy, e3 = dz − λy·dx, e4 = dt`, with `de3 = λ·e1∧e2`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::form::GramForm;
use crate::isometry::{wall_generators, Isometry};
use crate::json;
use crate::matrix::{solve_rational, IntMatrix, LatticeVector, RatMatrix};
use crate::orbit::planes::{plane_orbit, IsotropicPlane};
use crate::poly::{rat, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Kodaira {
    NegInfinity,
    Zero,
    One,
    Two,
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kodaira::NegInfinity => "-inf",
            Kodaira::Zero => "0",
            Kodaira::One => "1",
            Kodaira::Two => "2",
        })
    }
}

impl Serialize for Kodaira {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KodairaInput {
    pub k_dot_omega: i64,
    pub k_squared: i64,
    pub minimal: bool,
}

/// Kodaira dimension of a minimal symplectic 4-manifold.
///
/// `K·[ω] = 0` with `K·K > 0` is not covered by the definition and is
/// reported as inconsistent.
pub fn kodaira_dimension(inp: KodairaInput) -> Result<Kodaira> {
    if !inp.minimal {
        return Err(Error::Inconsistent("Kodaira dimension needs the values of a minimal model".into()));
    }
    let (kw, k2) = (inp.k_dot_omega, inp.k_squared);
    if kw < 0 || k2 < 0 {
        Ok(Kodaira::NegInfinity)
    } else if kw == 0 && k2 == 0 {
        Ok(Kodaira::Zero)
    } else if kw > 0 && k2 == 0 {
        Ok(Kodaira::One)
    } else if kw > 0 && k2 > 0 {
        Ok(Kodaira::Two)
    } else {
        Err(Error::Inconsistent(format!("K·[ω] = {kw} with K·K = {k2} > 0 is not a possible minimal pair")))
    }
}

/// `2χ + 3σ`, the norm of the canonical class.
pub fn canonical_norm(chi: i64, sigma: i64) -> i64 {
    2 * chi + 3 * sigma
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyTableRow {
    pub label: &'static str,
    pub b1: i64,
    pub b2: i64,
    pub b_plus: i64,
    pub chi: i64,
    pub sigma: i64,
}

impl CyTableRow {
    pub fn is_consistent(&self) -> bool {
        self.chi == 2 - 2 * self.b1 + self.b2 && self.sigma == 2 * self.b_plus - self.b2
    }
}

/// Homological invariants of the known symplectic Calabi–Yau surfaces.
pub fn cy_table() -> Vec<CyTableRow> {
    let row = |label, b1, b2, b_plus, chi, sigma| CyTableRow { label, b1, b2, b_plus, chi, sigma };
    vec![
        row("K3", 0, 22, 3, 24, -16),
        row("Enriques", 0, 10, 1, 12, -8),
        row("4-torus", 4, 6, 3, 0, 0),
        row("T2-bundle over T2 (b1 = 3)", 3, 4, 2, 0, 0),
        row("T2-bundle over T2 (b1 = 2)", 2, 2, 1, 0, 0),
    ]
}

/// A constant-coefficient form in the invariant coframe: sorted index sets to coefficients.
pub type Form = BTreeMap<Vec<usize>, BigRational>;

fn wedge(a: &Form, b: &Form) -> Form {
    let mut out = Form::new();
    for (ia, ca) in a {
        for (ib, cb) in b {
            let mut idx: Vec<usize> = ia.iter().chain(ib).copied().collect();
            let mut sign = 1i64;
            // Bubble sort, tracking the permutation sign; repeated indices vanish.
            for i in 0..idx.len() {
                for j in 0..idx.len() - 1 - i {
                    if idx[j] > idx[j + 1] {
                        idx.swap(j, j + 1);
                        sign = -sign;
                    }
                }
            }
            if idx.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let slot = out.entry(idx).or_insert_with(BigRational::zero);
            *slot += ca * cb * rat(sign);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn basis_form(idx: &[usize]) -> Form {
    let mut f = Form::new();
    f.insert(vec![idx[0]], BigRational::one());
    for &i in &idx[1..] {
        let mut e = Form::new();
        e.insert(vec![i], BigRational::one());
        f = wedge(&f, &e);
    }
    f
}

/// Invariant-form cohomology of the Kodaira–Thurston nilmanifold.
#[derive(Clone, Debug)]
pub struct KtAlgebra {
    pub lambda: i64,
    /// `d e_k` for the coframe `(dx, dy, dz − λy dx, dt)`, indices 0..4.
    pub differentials: Vec<Form>,
    /// `F1 = e1∧e4, F2 = e2∧e3, F3 = e2∧e4, F4 = e3∧e1`.
    pub f_basis: Vec<Form>,
    pub closed_two_forms: usize,
    pub exact_two_forms: usize,
    pub h2_gram: IntMatrix,
}

pub const COFRAME: [&str; 4] = ["dx", "dy", "dz - λy dx", "dt"];

fn exterior_d(diffs: &[Form], f: &Form) -> Form {
    let mut out = Form::new();
    for (idx, c) in f {
        for (pos, &k) in idx.iter().enumerate() {
            // d(e_{i1}∧…) = Σ (−1)^pos e_{i1}∧…∧de_k∧…
            let before = idx[..pos].iter().fold(None::<Form>, |acc, &i| {
                let e = basis_form(&[i]);
                Some(match acc {
                    None => e,
                    Some(a) => wedge(&a, &e),
                })
            });
            let mut term = match before {
                None => diffs[k].clone(),
                Some(b) => wedge(&b, &diffs[k]),
            };
            for &i in &idx[pos + 1..] {
                term = wedge(&term, &basis_form(&[i]));
            }
            let sign = if pos % 2 == 0 { BigRational::one() } else { -BigRational::one() };
            for (t, v) in term {
                *out.entry(t).or_insert_with(BigRational::zero) += v * c * &sign;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn two_form_index() -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            out.push(vec![i, j]);
        }
    }
    out
}

fn coords(f: &Form, index: &[Vec<usize>]) -> Vec<BigRational> {
    index.iter().map(|k| f.get(k).cloned().unwrap_or_else(BigRational::zero)).collect()
}

fn rank_of(rows: &[Vec<BigRational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = RatMatrix::from_rows(rows.to_vec());
    // rank = number of pivots in a row echelon form
    let mut a = m;
    let (r, c) = (a.nrows(), a.ncols());
    let mut rank = 0;
    for col in 0..c {
        let Some(p) = (rank..r).find(|&i| !a[(i, col)].is_zero()) else { continue };
        a.swap_rows(p, rank);
        for i in rank + 1..r {
            let f = &a[(i, col)] / &a[(rank, col)];
            for j in 0..c {
                let v = &f * &a[(rank, j)];
                a[(i, j)] -= v;
            }
        }
        rank += 1;
    }
    rank
}

pub fn kt_algebra(lambda: i64) -> Result<KtAlgebra> {
    if lambda == 0 {
        return Err(Error::Inconsistent("λ = 0 gives the 4-torus, not a Kodaira–Thurston manifold".into()));
    }
    let mut differentials = vec![Form::new(); 4];
    // d(dz − λy dx) = −λ dy∧dx = λ dx∧dy
    differentials[2].insert(vec![0, 1], rat(lambda));
    let f_basis = vec![
        basis_form(&[0, 3]),
        basis_form(&[1, 2]),
        basis_form(&[1, 3]),
        basis_form(&[2, 0]),
    ];
    let two = two_form_index();
    let d2: Vec<Vec<BigRational>> =
        two.iter().map(|k| coords(&exterior_d(&differentials, &basis_form(k)), &three_form_index())).collect();
    let closed = 6 - rank_of(&d2);
    let d1: Vec<Vec<BigRational>> =
        (0..4).map(|k| coords(&exterior_d(&differentials, &basis_form(&[k])), &two)).collect();
    let exact = rank_of(&d1);
    for (i, f) in f_basis.iter().enumerate() {
        if !exterior_d(&differentials, f).is_empty() {
            return Err(Error::VerificationFailed(format!("F{} is not closed", i + 1)));
        }
    }
    let vol = vec![0, 1, 2, 3];
    let mut h2_gram = IntMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            let top = wedge(&f_basis[i], &f_basis[j]);
            let c = top.get(&vol).cloned().unwrap_or_else(BigRational::zero);
            if !c.is_integer() {
                return Err(Error::VerificationFailed("non-integral intersection number".into()));
            }
            h2_gram[(i, j)] = c.to_integer();
        }
    }
    Ok(KtAlgebra { lambda, differentials, f_basis, closed_two_forms: closed, exact_two_forms: exact, h2_gram })
}

fn three_form_index() -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            for k in j + 1..4 {
                out.push(vec![i, j, k]);
            }
        }
    }
    out
}

impl KtAlgebra {
    pub fn h2_form(&self) -> Result<GramForm> {
        GramForm::new(self.h2_gram.clone())
    }

    /// Coordinates of a closed invariant 2-form in `(F1..F4)` modulo exact forms.
    pub fn cohomology_class(&self, f: &Form) -> Result<LatticeVector> {
        if !exterior_d(&self.differentials, f).is_empty() {
            return Err(Error::Inconsistent("form is not closed".into()));
        }
        let two = two_form_index();
        let mut spanning: Vec<Form> = self.f_basis.clone();
        for k in 0..4 {
            let ex = exterior_d(&self.differentials, &basis_form(&[k]));
            if !ex.is_empty() {
                spanning.push(ex);
            }
        }
        let cols: Vec<Vec<BigRational>> = spanning.iter().map(|s| coords(s, &two)).collect();
        let a = RatMatrix::from_rows((0..6).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect());
        let x = solve_rational(&a, &coords(f, &two)).ok_or_else(|| Error::Inconsistent("form outside the span".into()))?;
        let out: Option<Vec<BigInt>> = x[..4].iter().map(|v| v.is_integer().then(|| v.to_integer())).collect();
        out.map(LatticeVector).ok_or_else(|| Error::Inconsistent("class is not integral in the F basis".into()))
    }

    /// Span of cup products of `H¹ = <dx, dy, dt>`, as a plane in `(F1..F4)`.
    pub fn wedge_image(&self) -> Result<WedgeImage> {
        let h1 = [0usize, 1, 3];
        let mut products = Vec::new();
        for (a, &i) in h1.iter().enumerate() {
            for &j in &h1[a + 1..] {
                let class = self.cohomology_class(&basis_form(&[i, j]))?;
                products.push((format!("{}∧{}", COFRAME[i], COFRAME[j]), class));
            }
        }
        let rows: Vec<Vec<BigInt>> = products.iter().map(|(_, v)| v.0.clone()).collect();
        let hnf = IntMatrix::from_rows(rows).hermite_normal_form();
        if hnf.nrows() != 2 {
            return Err(Error::VerificationFailed(format!("cup-product image has rank {}", hnf.nrows())));
        }
        let plane = IsotropicPlane::new(&self.h2_form()?, hnf.row_vec(0), hnf.row_vec(1))?;
        Ok(WedgeImage { products, plane })
    }
}

#[derive(Clone, Debug)]
pub struct WedgeImage {
    pub products: Vec<(String, LatticeVector)>,
    pub plane: IsotropicPlane,
}

impl WedgeImage {
    pub fn to_json(&self) -> Value {
        json!({
            "products": self.products.iter().map(|(l, v)| json!({"product": l, "class": json::vector(v)})).collect::<Vec<_>>(),
            "plane": self.plane.to_json(),
        })
    }
}

/// `φ_T(α, z, t) = (αT, det T·z + αBαᵗ + α·c, t)` with `α = (x, y)`.
#[derive(Clone, Debug)]
pub struct PhiT {
    pub lambda: i64,
    pub t: IntMatrix,
    pub b: [[BigRational; 2]; 2],
    /// Linear correction; zero whenever the quadratic term alone keeps `L` integral.
    pub c: [BigRational; 2],
    /// `(l, l')` with `φ_T(l·p) = l'·φ_T(p)` for each lattice generator `l`.
    pub generator_images: Vec<(LatticeVector, LatticeVector)>,
}

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;
const TT: usize = 3;
const B11: usize = 4;
const W: usize = 10;
const KT_VARS: usize = 14;

type Point = [Poly; 4];

fn group_mul(lambda: i64, a: &Point, b: &Point) -> Point {
    let lam = Poly::int(a[0].nvars(), lambda);
    [
        &a[0] + &b[0],
        &a[1] + &b[1],
        &(&a[2] + &b[2]) + &(&lam * &(&a[0] * &b[1])),
        &a[3] + &b[3],
    ]
}

fn phi(t: &IntMatrix, b: &[[Poly; 2]; 2], c: &[Poly; 2], p: &Point) -> Point {
    let n = p[0].nvars();
    let k = |v: &BigInt| Poly::constant(n, BigRational::from_integer(v.clone()));
    let det = k(&t.det());
    let alpha = [&p[0], &p[1]];
    let new_alpha = [
        &(alpha[0] * &k(&t[(0, 0)])) + &(alpha[1] * &k(&t[(1, 0)])),
        &(alpha[0] * &k(&t[(0, 1)])) + &(alpha[1] * &k(&t[(1, 1)])),
    ];
    let mut quad = Poly::zero(n);
    for i in 0..2 {
        for j in 0..2 {
            quad = &quad + &(&(alpha[i] * &b[i][j]) * alpha[j]);
        }
        quad = &quad + &(alpha[i] * &c[i]);
    }
    [new_alpha[0].clone(), new_alpha[1].clone(), &(&det * &p[2]) + &quad, p[3].clone()]
}

fn lattice_point(n: usize, v: &[BigInt]) -> Point {
    let k = |x: &BigInt| Poly::constant(n, BigRational::from_integer(x.clone()));
    [k(&v[0]), k(&v[1]), k(&v[2]), k(&v[3])]
}

/// Residual `φ(l·p) − l'·φ(p)` for each generator, as polynomials in
/// `(x, y, z, t)` and the unknowns `b_ij, c_i, w_l` (the z-part of `l'`).
fn residuals(lambda: i64, t: &IntMatrix, b: &[[Poly; 2]; 2], c: &[Poly; 2]) -> Vec<(LatticeVector, [BigInt; 2], Point)> {
    let n = KT_VARS;
    let p: Point = [Poly::var(n, X), Poly::var(n, Y), Poly::var(n, Z), Poly::var(n, TT)];
    let mut out = Vec::new();
    for g in 0..4 {
        let l = LatticeVector::unit(4, g);
        let beta = [l[0].clone(), l[1].clone()];
        let beta_t = [&beta[0] * &t[(0, 0)] + &beta[1] * &t[(1, 0)], &beta[0] * &t[(0, 1)] + &beta[1] * &t[(1, 1)]];
        let lhs = phi(t, b, c, &group_mul(lambda, &lattice_point(n, &l.0), &p));
        let k = |x: &BigInt| Poly::constant(n, BigRational::from_integer(x.clone()));
        let l_img: Point = [k(&beta_t[0]), k(&beta_t[1]), Poly::var(n, W + g), k(&l[3])];
        let rhs = group_mul(lambda, &l_img, &phi(t, b, c, &p));
        let res = [&lhs[0] - &rhs[0], &lhs[1] - &rhs[1], &lhs[2] - &rhs[2], &lhs[3] - &rhs[3]];
        out.push((l, beta_t, res));
    }
    out
}

/// Splits residuals into linear equations in the unknowns by matching
/// coefficients of every monomial in `(x, y, z, t)`.
fn linear_system(res: &[(LatticeVector, [BigInt; 2], Point)], unknowns: &[usize]) -> Result<(RatMatrix, Vec<BigRational>)> {
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (_, _, point) in res {
        for comp in point {
            let mut by_mono: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
            for (e, c) in comp.terms() {
                let key = e[..4].to_vec();
                let mut rest = e.clone();
                rest[..4].iter_mut().for_each(|d| *d = 0);
                let mut mono = Poly::constant(KT_VARS, c.clone());
                for (v, &d) in rest.iter().enumerate() {
                    for _ in 0..d {
                        mono = &mono * &Poly::var(KT_VARS, v);
                    }
                }
                let slot = by_mono.entry(key).or_insert_with(|| Poly::zero(KT_VARS));
                *slot = &*slot + &mono;
            }
            for coeff in by_mono.values() {
                let mut row = vec![BigRational::zero(); unknowns.len()];
                let mut constant = BigRational::zero();
                for (e, c) in coeff.terms() {
                    let deg: u32 = e.iter().sum();
                    match deg {
                        0 => constant += c,
                        1 => {
                            let v = e.iter().position(|&d| d == 1).expect("degree one");
                            let col = unknowns.iter().position(|&u| u == v).ok_or_else(|| {
                                Error::VerificationFailed(format!("unexpected unknown {v} in the normalization system"))
                            })?;
                            row[col] += c;
                        }
                        _ => return Err(Error::VerificationFailed("normalization system is not linear".into())),
                    }
                }
                rows.push(row);
                rhs.push(-constant);
            }
        }
    }
    Ok((RatMatrix::from_rows(rows), rhs))
}

/// Finds `B` (and, if needed, a half-integral linear term) making `φ_T`
/// normalize the lattice, then checks the result as a polynomial identity.
pub fn solve_phi_t(lambda: i64, t: &IntMatrix) -> Result<PhiT> {
    if t.nrows() != 2 || t.ncols() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: t.nrows() });
    }
    if !t.det().abs().is_one() {
        return Err(Error::Inconsistent("T must have determinant ±1".into()));
    }
    let n = KT_VARS;
    let b_sym: [[Poly; 2]; 2] = [
        [Poly::var(n, B11), Poly::var(n, B11 + 1)],
        [Poly::var(n, B11 + 2), Poly::var(n, B11 + 3)],
    ];
    let mut c_val = [BigRational::zero(), BigRational::zero()];
    let unknowns: Vec<usize> = (B11..B11 + 4).chain(W..W + 4).collect();
    for attempt in 0..2 {
        let c_poly = [Poly::constant(n, c_val[0].clone()), Poly::constant(n, c_val[1].clone())];
        let res = residuals(lambda, t, &b_sym, &c_poly);
        let (a, rhs) = linear_system(&res, &unknowns)?;
        let sol = solve_rational(&a, &rhs)
            .ok_or_else(|| Error::VerificationFailed("no rational B normalizes the lattice".into()))?;
        let w = &sol[4..];
        if w.iter().all(|v| v.is_integer()) {
            let b = [[sol[0].clone(), sol[1].clone()], [sol[2].clone(), sol[3].clone()]];
            let generator_images = res
                .iter()
                .zip(w)
                .map(|((l, bt, _), wz)| {
                    (l.clone(), LatticeVector(vec![bt[0].clone(), bt[1].clone(), wz.to_integer(), l[3].clone()]))
                })
                .collect();
            let out = PhiT { lambda, t: t.clone(), b, c: c_val, generator_images };
            out.verify()?;
            return Ok(out);
        }
        if attempt == 1 {
            break;
        }
        // The z-shift of the image of the x (resp. y) generator moves one-for-one with c1 (resp. c2).
        for i in 0..2 {
            c_val[i] = w[i].floor() - &w[i];
        }
    }
    Err(Error::VerificationFailed("lattice images are not integral".into()))
}

impl PhiT {
    fn polys(&self) -> ([[Poly; 2]; 2], [Poly; 2]) {
        let k = |v: &BigRational| Poly::constant(KT_VARS, v.clone());
        (
            [[k(&self.b[0][0]), k(&self.b[0][1])], [k(&self.b[1][0]), k(&self.b[1][1])]],
            [k(&self.c[0]), k(&self.c[1])],
        )
    }

    /// Exact identity `φ(l·p) = l'·φ(p)` in `(x, y, z, t)` for every generator,
    /// plus a cross-check at sample points.
    pub fn verify(&self) -> Result<()> {
        let (b, c) = self.polys();
        let res = residuals(self.lambda, &self.t, &b, &c);
        let mut values = BTreeMap::new();
        for (g, (_, l_img)) in self.generator_images.iter().enumerate() {
            values.insert(W + g, BigRational::from_integer(l_img[2].clone()));
        }
        for (l, _, point) in &res {
            for comp in point {
                if !comp.substitute_all(&values).is_zero() {
                    return Err(Error::VerificationFailed(format!("φ_T does not normalize the generator {l}")));
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..20 {
            let mut pt = vec![BigRational::zero(); KT_VARS];
            for v in pt.iter_mut().take(4) {
                *v = BigRational::new(rng.gen_range(-50..=50).into(), rng.gen_range(1..=7).into());
            }
            for (g, (_, l_img)) in self.generator_images.iter().enumerate() {
                pt[W + g] = BigRational::from_integer(l_img[2].clone());
            }
            for (_, _, point) in &res {
                if point.iter().any(|comp| !comp.eval(&pt).is_zero()) {
                    return Err(Error::VerificationFailed("sample point check failed".into()));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lambda": self.lambda,
            "T": json::matrix(&self.t),
            "B": self.b.iter().map(|r| r.iter().map(json::rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "c": self.c.iter().map(json::rational).collect::<Vec<_>>(),
            "generator_images": self.generator_images.iter().map(|(l, m)| json!({"l": json::vector(l), "image": json::vector(m)})).collect::<Vec<_>>(),
        })
    }
}

/// Isometries of `2U` carrying `<F1, F3> = <x0, x1>` to pairwise distinct planes.
#[derive(Clone, Debug)]
pub struct PlaneCertificate {
    pub form: std::sync::Arc<GramForm>,
    pub plane: IsotropicPlane,
    pub witnesses: Vec<Isometry>,
    pub images: Vec<IsotropicPlane>,
}

impl PlaneCertificate {
    pub fn verify(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for (g, img) in self.witnesses.iter().zip(&self.images) {
            Isometry::new(self.form.clone(), g.matrix().clone())?;
            let computed = self.plane.image(&self.form, g)?;
            if !computed.same_sublattice(img) || !seen.insert(img.key()) {
                return Err(Error::VerificationFailed("plane images are wrong or repeat".into()));
            }
        }
        if self.images.len() != self.witnesses.len() {
            return Err(Error::VerificationFailed("one image per witness expected".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "form": json::form(&self.form),
            "plane": self.plane.to_json(),
            "witnesses": self.witnesses.iter().map(|g| json::matrix(g.matrix())).collect::<Vec<_>>(),
            "images": self.images.iter().map(IsotropicPlane::to_json).collect::<Vec<_>>(),
        })
    }
}

pub fn kt_infinite_index_witness(n: usize) -> Result<PlaneCertificate> {
    if n == 0 {
        return Err(Error::Inconsistent("at least one witness is required".into()));
    }
    let gens = wall_generators(2)?;
    let form = gens.form.clone();
    let plane = IsotropicPlane::new(&form, LatticeVector::from_i64s(&[1, 0, 0, 0]), LatticeVector::from_i64s(&[0, 0, 1, 0]))?;
    let orbit = plane_orbit(&gens, &plane, n)?;
    if orbit.len() < n {
        return Err(Error::BudgetExhausted(format!("only {} distinct planes reached", orbit.len())));
    }
    let (witnesses, images) = orbit.into_iter().map(|e| (e.witness, e.plane)).unzip();
    Ok(PlaneCertificate { form, plane, witnesses, images })
}
