//! Integral isometries of a Gram form.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::GramForm;
use crate::matrix::{IntMatrix, LatticeVector, RatMatrix};

/// An integer matrix `g` (acting on coordinate columns) with `gᵀ G g = G`.
#[derive(Clone)]
pub struct Isometry {
    form: Arc<GramForm>,
    mat: IntMatrix,
}

impl PartialEq for Isometry {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat && same_form(&self.form, &other.form)
    }
}

impl Eq for Isometry {}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Isometry {:?}", self.mat)
    }
}

fn same_form(a: &Arc<GramForm>, b: &Arc<GramForm>) -> bool {
    Arc::ptr_eq(a, b) || a.gram() == b.gram()
}

impl Isometry {
    /// Checks `matᵀ G mat = G` exactly.
    pub fn new(form: Arc<GramForm>, mat: IntMatrix) -> Result<Self> {
        let n = form.dim();
        if mat.nrows() != n || mat.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: mat.nrows() });
        }
        let pulled = &(&mat.transpose() * form.gram()) * &mat;
        if &pulled != form.gram() {
            return Err(Error::NotAnIsometry);
        }
        Ok(Isometry { form, mat })
    }

    pub fn identity(form: Arc<GramForm>) -> Self {
        let n = form.dim();
        Isometry { form, mat: IntMatrix::identity(n) }
    }

    pub fn form(&self) -> &Arc<GramForm> {
        &self.form
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.mat
    }

    pub fn is_identity(&self) -> bool {
        self.mat.is_identity()
    }

    pub fn det(&self) -> BigInt {
        self.mat.det()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        if !same_form(&self.form, &other.form) {
            return Err(Error::FormMismatch);
        }
        Ok(Isometry { form: self.form.clone(), mat: &self.mat * &other.mat })
    }

    /// `g⁻¹ = G⁻¹ gᵀ G`.
    pub fn inverse(&self) -> Isometry {
        let mat = match self.form.gram().inverse_unimodular() {
            Some(gi) => &(&gi * &self.mat.transpose()) * self.form.gram(),
            None => self.mat.inverse_unimodular().expect("isometry of a nondegenerate form is invertible"),
        };
        Isometry { form: self.form.clone(), mat }
    }

    pub fn apply(&self, v: &LatticeVector) -> Result<LatticeVector> {
        if v.dim() != self.form.dim() {
            return Err(Error::DimensionMismatch { expected: self.form.dim(), got: v.dim() });
        }
        Ok(self.mat.mul_vec(v))
    }

    pub fn pow(&self, k: u32) -> Isometry {
        let mut out = Isometry::identity(self.form.clone());
        for _ in 0..k {
            out.mat = &out.mat * &self.mat;
        }
        out
    }
}

/// `x ↦ x − (2(x·γ)/Q(γ))γ` as an integral isometry.
pub fn reflection(form: &Arc<GramForm>, gamma: &LatticeVector) -> Result<Isometry> {
    let q = form.norm(gamma)?;
    if q.is_zero() {
        return Err(Error::IsotropicReflection);
    }
    let g_gamma = form.gram().mul_vec(gamma);
    let n = form.dim();
    let mut mat = IntMatrix::identity(n);
    for j in 0..n {
        let twice = BigInt::from(2) * &g_gamma[j];
        let (coef, rem) = twice.div_rem(&q);
        if !rem.is_zero() {
            return Err(Error::NonIntegralReflection { basis_index: j });
        }
        for i in 0..n {
            mat[(i, j)] -= &coef * &gamma[i];
        }
    }
    Ok(Isometry { form: form.clone(), mat })
}

/// Named generators of a subgroup of `A(Γ)`.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub form: Arc<GramForm>,
    pub generators: Vec<(String, Isometry)>,
}

impl GeneratorSet {
    pub fn new(form: Arc<GramForm>) -> Self {
        GeneratorSet { form, generators: Vec::new() }
    }

    pub fn push(&mut self, label: impl Into<String>, g: Isometry) -> Result<()> {
        if !same_form(&self.form, g.form()) {
            return Err(Error::FormMismatch);
        }
        self.generators.push((label.into(), g));
        Ok(())
    }

    pub fn get(&self, label: &str) -> Option<&Isometry> {
        self.generators.iter().find(|(l, _)| l == label).map(|(_, g)| g)
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Adds `label'` inverses for generators that are not involutions.
    pub fn with_inverses(&self) -> GeneratorSet {
        let mut out = self.clone();
        for (label, g) in &self.generators {
            let inv = g.inverse();
            if inv != *g {
                out.generators.push((format!("{label}'"), inv));
            }
        }
        out
    }

    /// Evaluates a word such as `["n1", "a12", "s3"]` as the product left to right.
    pub fn word(&self, labels: &[impl AsRef<str>]) -> Result<Isometry> {
        let mut acc = Isometry::identity(self.form.clone());
        for l in labels {
            let l = l.as_ref();
            let g = match self.get(l) {
                Some(g) => g.clone(),
                None => match l.strip_suffix('\'') {
                    Some(base) => self
                        .get(base)
                        .ok_or_else(|| Error::Parse(format!("unknown generator `{l}`")))?
                        .inverse(),
                    None => return Err(Error::Parse(format!("unknown generator `{l}`"))),
                },
            };
            acc = acc.compose(&g)?;
        }
        Ok(acc)
    }
}

/// Wall's generators `n_i, s_i, p_ij, α_ij` of `A(nU)` in basis `(x1,y1,…,xn,yn)`.
///
/// Labels: `n{i}`, `s{i}`, `p{i}{j}` (i<j), `a{i}{j}` (i≠j), 1-based.
pub fn wall_generators(n: usize) -> Result<GeneratorSet> {
    if n == 0 {
        return Err(Error::EmptyForm);
    }
    let form = Arc::new(GramForm::standard(crate::form::FormSpec::even(n, 0))?);
    let dim = 2 * n;
    let x = |i: usize| 2 * i;
    let y = |i: usize| 2 * i + 1;
    let from_images = |images: &[(usize, Vec<(usize, i64)>)]| -> IntMatrix {
        let mut m = IntMatrix::identity(dim);
        for (col, image) in images {
            for r in 0..dim {
                m[(r, *col)] = BigInt::zero();
            }
            for &(r, c) in image {
                m[(r, *col)] += BigInt::from(c);
            }
        }
        m
    };
    let mut set = GeneratorSet::new(form.clone());
    for i in 0..n {
        let m = from_images(&[(x(i), vec![(x(i), -1)]), (y(i), vec![(y(i), -1)])]);
        set.push(format!("n{}", i + 1), Isometry::new(form.clone(), m)?)?;
    }
    for i in 0..n {
        let m = from_images(&[(x(i), vec![(y(i), 1)]), (y(i), vec![(x(i), 1)])]);
        set.push(format!("s{}", i + 1), Isometry::new(form.clone(), m)?)?;
    }
    for i in 0..n {
        for j in i + 1..n {
            let m = from_images(&[
                (x(i), vec![(x(j), 1)]),
                (y(i), vec![(y(j), 1)]),
                (x(j), vec![(x(i), 1)]),
                (y(j), vec![(y(i), 1)]),
            ]);
            set.push(format!("p{}{}", i + 1, j + 1), Isometry::new(form.clone(), m)?)?;
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let m = from_images(&[
                (x(i), vec![(x(i), 1), (x(j), 1)]),
                (y(j), vec![(y(j), 1), (y(i), -1)]),
            ]);
            set.push(format!("a{}{}", i + 1, j + 1), Isometry::new(form.clone(), m)?)?;
        }
    }
    Ok(set)
}

/// Which of the four components of the real orthogonal group an isometry lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ComponentInvariant {
    /// `det g`.
    pub eps_det: i8,
    /// Orientation behaviour on a maximal positive definite subspace.
    pub eps_plus: i8,
}

impl ComponentInvariant {
    pub const IDENTITY: ComponentInvariant = ComponentInvariant { eps_det: 1, eps_plus: 1 };

    pub fn mul(self, other: Self) -> Self {
        ComponentInvariant { eps_det: self.eps_det * other.eps_det, eps_plus: self.eps_plus * other.eps_plus }
    }

    /// The spinor norm predicted by the component: `eps_det · eps_plus`.
    pub fn spinor_sign(self) -> i8 {
        self.eps_det * self.eps_plus
    }
}

pub fn component_invariant(g: &Isometry) -> Result<ComponentInvariant> {
    let form = g.form();
    let inv = form.invariants()?;
    if !inv.is_indefinite() {
        return Err(Error::Definite("component invariant is degenerate on definite forms"));
    }
    let d = form.diagonalization()?;
    let p = d.basis.transpose();
    let p_inv = p.inverse().ok_or(Error::Degenerate)?;
    let conj = &(&p_inv * &g.matrix().to_rational()) * &p;
    let block = conj.submatrix(0..d.b_plus, 0..d.b_plus).det();
    let eps_det = if g.det().is_positive() { 1 } else { -1 };
    let eps_plus = if block.is_positive() { 1 } else { -1 };
    Ok(ComponentInvariant { eps_det, eps_plus })
}

fn rat_dot(form: &GramForm, x: &[BigRational], y: &[BigRational]) -> BigRational {
    let g = form.gram();
    let n = form.dim();
    let mut s = BigRational::zero();
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if !y[j].is_zero() && !g[(i, j)].is_zero() {
                s += &x[i] * BigRational::from_integer(g[(i, j)].clone()) * &y[j];
            }
        }
    }
    s
}

/// Rational reflection matrix for any anisotropic rational vector.
pub fn rational_reflection(form: &GramForm, gamma: &[BigRational]) -> RatMatrix {
    let n = form.dim();
    let q = rat_dot(form, gamma, gamma);
    let mut m = RatMatrix::identity(n);
    for j in 0..n {
        let mut e = vec![BigRational::zero(); n];
        e[j] = BigRational::one();
        let c = BigRational::from_integer(2.into()) * rat_dot(form, &e, gamma) / &q;
        for i in 0..n {
            m[(i, j)] -= &c * &gamma[i];
        }
    }
    m
}

fn apply_rat(m: &RatMatrix, v: &[BigRational]) -> Vec<BigRational> {
    (0..m.nrows()).map(|i| m.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Clears denominators and content: the primitive integer vector on the same line.
pub fn primitive_direction(v: &[BigRational]) -> LatticeVector {
    let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let lv = LatticeVector(ints);
    let mut c = lv.content();
    if c.is_zero() {
        return lv;
    }
    if lv.0.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
        c = -c;
    }
    LatticeVector(lv.0.iter().map(|x| x / &c).collect())
}

/// Cartan–Dieudonné factorization `g = R_{γ1} ∘ … ∘ R_{γk}` over the rationals.
///
/// Works along an orthogonal rational basis `e_i`: each step reflects the
/// current image of `e_i` back onto `e_i`, splitting into `R_{e_i} R_{u+e_i}`
/// when `u − e_i` is isotropic. Reflection vectors are returned as primitive
/// integer vectors. At most `2·dim` factors.
pub fn spinor_factorization(g: &Isometry) -> Result<Vec<LatticeVector>> {
    let form = g.form();
    let n = form.dim();
    let target = g.matrix().to_rational();
    if g.is_identity() {
        return Ok(Vec::new());
    }
    // A single reflection is returned as itself.
    let diff = IntMatrix::from_rows(
        (0..n)
            .map(|i| (0..n).map(|j| &g.matrix()[(i, j)] - if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect(),
    );
    if diff.rank() == 1 {
        let col = (0..n).map(|j| diff.column(j)).find(|c| !c.is_zero()).expect("rank one");
        let gamma = primitive_direction(&col.0.iter().map(|x| BigRational::from_integer(x.clone())).collect::<Vec<_>>());
        if !form.norm(&gamma)?.is_zero() {
            let r = rational_reflection(form, &to_rat(&gamma));
            if r == target {
                return Ok(vec![gamma]);
            }
        }
    }

    let d = form.diagonalization()?;
    let mut h = target;
    let mut factors: Vec<Vec<BigRational>> = Vec::new();
    for i in 0..n {
        let e: Vec<BigRational> = d.basis.row(i).to_vec();
        let u = apply_rat(&h, &e);
        if u == e {
            continue;
        }
        let diffv: Vec<BigRational> = u.iter().zip(&e).map(|(a, b)| a - b).collect();
        let steps: Vec<Vec<BigRational>> = if !rat_dot(form, &diffv, &diffv).is_zero() {
            vec![diffv]
        } else {
            let sum: Vec<BigRational> = u.iter().zip(&e).map(|(a, b)| a + b).collect();
            vec![sum, e.clone()]
        };
        for s in steps {
            h = &rational_reflection(form, &s) * &h;
            factors.push(s);
        }
    }
    if h != RatMatrix::identity(n) {
        return Err(Error::VerificationFailed("reflection factorization did not terminate at identity".into()));
    }
    Ok(factors.iter().map(|f| primitive_direction(f)).collect())
}

fn to_rat(v: &LatticeVector) -> Vec<BigRational> {
    v.0.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Ordered product of the reflections, as a rational matrix.
pub fn reflection_product(form: &GramForm, gammas: &[LatticeVector]) -> RatMatrix {
    gammas.iter().fold(RatMatrix::identity(form.dim()), |acc, gm| &acc * &rational_reflection(form, &to_rat(gm)))
}

/// Product of `sign Q(γ)` over a reflection factorization.
pub fn spinor_norm(g: &Isometry) -> Result<i8> {
    let form = g.form();
    let mut s = 1i8;
    for gamma in spinor_factorization(g)? {
        if form.norm(&gamma)?.is_negative() {
            s = -s;
        }
    }
    Ok(s)
}
