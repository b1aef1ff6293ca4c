//! Unimodular symmetric bilinear forms and vector predicates.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, LatticeVector, RatMatrix};

/// Cartan matrix of E8 (Bourbaki labelling: chain 1-3-4-5-6-7-8, node 2 on node 4).
pub const E8_CARTAN: [[i64; 8]; 8] = [
    [2, 0, -1, 0, 0, 0, 0, 0],
    [0, 2, 0, -1, 0, 0, 0, 0],
    [-1, 0, 2, -1, 0, 0, 0, 0],
    [0, -1, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, -1],
    [0, 0, 0, 0, 0, 0, -1, 2],
];

/// Block counts of a standard form `m<1> + n<-1> + pU + qE8`.
///
/// Negative `q` stands for `|q|` copies of `-E8`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormSpec {
    pub plus_ones: usize,
    pub minus_ones: usize,
    pub hyperbolic: usize,
    pub e8: i64,
}

impl FormSpec {
    pub fn diagonal(m: usize, n: usize) -> Self {
        FormSpec { plus_ones: m, minus_ones: n, ..Default::default() }
    }

    pub fn even(p: usize, q: i64) -> Self {
        FormSpec { hyperbolic: p, e8: q, ..Default::default() }
    }

    pub fn rank(&self) -> usize {
        self.plus_ones + self.minus_ones + 2 * self.hyperbolic + 8 * self.e8.unsigned_abs() as usize
    }

    pub fn signature(&self) -> i64 {
        self.plus_ones as i64 - self.minus_ones as i64 + 8 * self.e8
    }

    pub fn parity(&self) -> Parity {
        if self.plus_ones + self.minus_ones > 0 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

impl fmt::Display for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        let count = |n: u64| if n == 1 { String::new() } else { n.to_string() };
        if self.plus_ones > 0 {
            terms.push(format!("{}<1>", count(self.plus_ones as u64)));
        }
        if self.minus_ones > 0 {
            terms.push(format!("{}<-1>", count(self.minus_ones as u64)));
        }
        if self.hyperbolic > 0 {
            terms.push(format!("{}U", count(self.hyperbolic as u64)));
        }
        match self.e8.cmp(&0) {
            std::cmp::Ordering::Greater => terms.push(format!("{}E8", count(self.e8 as u64))),
            std::cmp::Ordering::Less => terms.push(format!("{}(-E8)", count(self.e8.unsigned_abs()))),
            std::cmp::Ordering::Equal => {}
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

/// Parses strings such as `2<1>+<-1>`, `3U`, `U+2(-E8)`, `2U+E8`.
impl FromStr for FormSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut spec = FormSpec::default();
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty form description".into()));
        }
        for term in split_terms(&cleaned) {
            let digits: String = term.chars().take_while(char::is_ascii_digit).collect();
            let atom = &term[digits.len()..];
            let n: u64 = if digits.is_empty() {
                1
            } else {
                digits.parse().map_err(|_| Error::Parse(format!("bad count in `{term}`")))?
            };
            match atom {
                "<1>" | "<+1>" => spec.plus_ones += n as usize,
                "<-1>" => spec.minus_ones += n as usize,
                "U" => spec.hyperbolic += n as usize,
                "E" | "E8" => spec.e8 += n as i64,
                "(-E)" | "(-E8)" | "-E" | "-E8" => spec.e8 -= n as i64,
                _ => return Err(Error::Parse(format!("unknown summand `{term}`"))),
            }
        }
        Ok(spec)
    }
}

// Splits on '+' that are not inside <...> or (...).
fn split_terms(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '<' | '(' => depth += 1,
            '>' | ')' => depth -= 1,
            '+' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

/// `min(b+, b-)` = 0, 1, or ≥ 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    Definite,
    NearlyDefinite,
    StronglyIndefinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormInvariants {
    pub rank: usize,
    pub b_plus: usize,
    pub b_minus: usize,
    pub signature: i64,
    pub parity: Parity,
    pub definiteness: Definiteness,
    /// The automorphism group is finite exactly for definite forms and
    /// indefinite forms of rank 2. Kept apart from `definiteness`, which
    /// labels `U` nearly definite.
    pub finite_automorphism_group: bool,
}

impl FormInvariants {
    pub fn is_indefinite(&self) -> bool {
        self.definiteness != Definiteness::Definite
    }
}

/// An orthogonal rational basis: row `i` of `basis` has norm `diag[i]`.
/// Rows are ordered with positive norms first.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub basis: RatMatrix,
    pub diag: Vec<BigRational>,
    pub b_plus: usize,
}

/// A symmetric integer Gram matrix; `x·y = xᵀ G y`.
#[derive(Clone)]
pub struct GramForm {
    gram: IntMatrix,
    diagonal: OnceLock<std::result::Result<Diagonalization, Error>>,
}

impl PartialEq for GramForm {
    fn eq(&self, other: &Self) -> bool {
        self.gram == other.gram
    }
}

impl Eq for GramForm {}

impl fmt::Debug for GramForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GramForm").field("gram", &self.gram).finish()
    }
}

impl GramForm {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if gram.nrows() == 0 {
            return Err(Error::EmptyForm);
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(GramForm { gram, diagonal: OnceLock::new() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(IntMatrix::from_i64(rows))
    }

    /// Block-diagonal standard form in the order `<±1>` blocks, `U` blocks, `E8` blocks.
    pub fn standard(spec: FormSpec) -> Result<Self> {
        if spec.rank() == 0 {
            return Err(Error::EmptyForm);
        }
        let mut blocks: Vec<IntMatrix> = Vec::new();
        blocks.extend((0..spec.plus_ones).map(|_| IntMatrix::from_i64(&[&[1]])));
        blocks.extend((0..spec.minus_ones).map(|_| IntMatrix::from_i64(&[&[-1]])));
        blocks.extend((0..spec.hyperbolic).map(|_| hyperbolic_plane()));
        let e8 = e8_cartan();
        for _ in 0..spec.e8.unsigned_abs() {
            blocks.push(if spec.e8 > 0 { e8.clone() } else { e8.neg() });
        }
        let mut gram = blocks[0].clone();
        for b in &blocks[1..] {
            gram = gram.direct_sum(b);
        }
        Self::new(gram)
    }

    pub fn parse(desc: &str) -> Result<Self> {
        Self::standard(desc.parse()?)
    }

    pub fn direct_sum(&self, other: &GramForm) -> GramForm {
        GramForm { gram: self.gram.direct_sum(&other.gram), diagonal: OnceLock::new() }
    }

    pub fn negated(&self) -> GramForm {
        GramForm { gram: self.gram.neg(), diagonal: OnceLock::new() }
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn det(&self) -> BigInt {
        self.gram.det()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn is_even(&self) -> bool {
        (0..self.dim()).all(|i| self.gram[(i, i)].is_even())
    }

    fn check_dim(&self, v: &LatticeVector) -> Result<()> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.dim() });
        }
        Ok(())
    }

    /// `x·y`.
    pub fn dot(&self, x: &LatticeVector, y: &LatticeVector) -> Result<BigInt> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.dot_unchecked(x, y))
    }

    pub(crate) fn dot_unchecked(&self, x: &LatticeVector, y: &LatticeVector) -> BigInt {
        let gy = self.gram.mul_vec(y);
        x.0.iter().zip(&gy.0).map(|(a, b)| a * b).sum()
    }

    /// `Q(v) = v·v`.
    pub fn norm(&self, v: &LatticeVector) -> Result<BigInt> {
        self.dot(v, v)
    }

    /// `v·y ≡ y·y (mod 2)` for all `y`; checking the basis suffices.
    pub fn is_characteristic(&self, v: &LatticeVector) -> Result<bool> {
        self.check_dim(v)?;
        let gv = self.gram.mul_vec(v);
        Ok((0..self.dim()).all(|i| (&gv[i] - &self.gram[(i, i)]).is_even()))
    }

    /// Some characteristic vector with 0/1 coordinates (solves `G w ≡ diag G` mod 2).
    pub fn characteristic_vector(&self) -> Result<LatticeVector> {
        let n = self.dim();
        let mut rows: Vec<Vec<u8>> = (0..n)
            .map(|i| {
                let mut r: Vec<u8> =
                    (0..n).map(|j| u8::from(self.gram[(i, j)].is_odd())).collect();
                r.push(u8::from(self.gram[(i, i)].is_odd()));
                r
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..n).find(|&i| rows[i][c] == 1) else { continue };
            rows.swap(p, r);
            for i in 0..n {
                if i != r && rows[i][c] == 1 {
                    let pr = rows[r].clone();
                    for (x, y) in rows[i].iter_mut().zip(pr) {
                        *x ^= y;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        if (r..n).any(|i| rows[i][n] == 1) {
            return Err(Error::Degenerate);
        }
        let mut w = LatticeVector::zero(n);
        for (i, &c) in pivots.iter().enumerate() {
            w.0[c] = BigInt::from(rows[i][n]);
        }
        Ok(w)
    }

    /// Exact rational diagonalization (cached).
    pub fn diagonalization(&self) -> Result<&Diagonalization> {
        self.diagonal
            .get_or_init(|| diagonalize(&self.gram))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn invariants(&self) -> Result<FormInvariants> {
        let d = self.diagonalization()?;
        let rank = self.dim();
        let b_plus = d.b_plus;
        let b_minus = rank - b_plus;
        let definiteness = match b_plus.min(b_minus) {
            0 => Definiteness::Definite,
            1 => Definiteness::NearlyDefinite,
            _ => Definiteness::StronglyIndefinite,
        };
        Ok(FormInvariants {
            rank,
            b_plus,
            b_minus,
            signature: b_plus as i64 - b_minus as i64,
            parity: if self.is_even() { Parity::Even } else { Parity::Odd },
            definiteness,
            finite_automorphism_group: definiteness == Definiteness::Definite || rank == 2,
        })
    }

    /// True iff the two rows span a full (saturated), isotropic sublattice of rank 2.
    pub fn is_full_isotropic_plane(&self, u: &LatticeVector, v: &LatticeVector) -> bool {
        if u.dim() != self.dim() || v.dim() != self.dim() {
            return false;
        }
        let isotropic = self.dot_unchecked(u, u).is_zero()
            && self.dot_unchecked(v, v).is_zero()
            && self.dot_unchecked(u, v).is_zero();
        if !isotropic {
            return false;
        }
        let m = IntMatrix::from_rows(vec![u.0.clone(), v.0.clone()]);
        // Rank 2 and trivial elementary divisors: the 2x2 minors are coprime.
        m.minor_gcd(2).is_one()
    }
}

pub fn hyperbolic_plane() -> IntMatrix {
    IntMatrix::from_i64(&[&[0, 1], &[1, 0]])
}

pub fn e8_cartan() -> IntMatrix {
    IntMatrix::from_rows(E8_CARTAN.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
}

/// Symmetric Gauss reduction over Q. A zero pivot with a nonzero entry in its
/// row is repaired by adding that row's basis vector first.
fn diagonalize(gram: &IntMatrix) -> std::result::Result<Diagonalization, Error> {
    let n = gram.nrows();
    let g = gram.to_rational();
    let mut basis = RatMatrix::identity(n);
    let pair = |basis: &RatMatrix, i: usize, j: usize| -> BigRational {
        let mut s = BigRational::zero();
        for a in 0..n {
            if basis[(i, a)].is_zero() {
                continue;
            }
            for b in 0..n {
                if !basis[(j, b)].is_zero() {
                    s += &basis[(i, a)] * &g[(a, b)] * &basis[(j, b)];
                }
            }
        }
        s
    };
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        let mut d = pair(&basis, i, i);
        if d.is_zero() {
            let partner = (i + 1..n).find(|&j| !pair(&basis, i, j).is_zero());
            let Some(j) = partner else { return Err(Error::Degenerate) };
            if !pair(&basis, j, j).is_zero() {
                basis.swap_rows(i, j);
            } else {
                for c in 0..n {
                    let v = basis[(j, c)].clone();
                    basis[(i, c)] += v;
                }
            }
            d = pair(&basis, i, i);
        }
        for j in i + 1..n {
            let f = pair(&basis, j, i) / &d;
            if f.is_zero() {
                continue;
            }
            for c in 0..n {
                let v = &f * &basis[(i, c)];
                basis[(j, c)] -= v;
            }
        }
        diag.push(d);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| !diag[i].is_positive());
    let b_plus = diag.iter().filter(|d| d.is_positive()).count();
    let sorted_basis = RatMatrix::from_rows(order.iter().map(|&i| basis.row(i).to_vec()).collect());
    let sorted_diag = order.iter().map(|&i| diag[i].clone()).collect();
    Ok(Diagonalization { basis: sorted_basis, diag: sorted_diag, b_plus })
}

/// Invariants of a unimodular form, with its standard representative when indefinite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub invariants: FormInvariants,
    pub canonical: Option<FormSpec>,
    pub note: Option<String>,
}

pub fn classify(form: &GramForm) -> Result<Classification> {
    let det = form.det();
    if det.is_zero() {
        return Err(Error::Degenerate);
    }
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular(det.to_string()));
    }
    let invariants = form.invariants()?;
    match canonical_spec(&invariants) {
        Ok(spec) => Ok(Classification { invariants, canonical: Some(spec), note: None }),
        Err(Error::Definite(_)) => Ok(Classification {
            invariants,
            canonical: None,
            note: Some("definite form: classification by rank, signature and type does not apply".into()),
        }),
        Err(e) => Err(e),
    }
}

/// Block counts of the standard form with the given invariants (indefinite forms only).
pub fn canonical_spec(inv: &FormInvariants) -> Result<FormSpec> {
    if inv.b_plus == 0 || inv.b_minus == 0 {
        return Err(Error::Definite("classification by rank, signature and type needs an indefinite form"));
    }
    let spec = match inv.parity {
        Parity::Odd => FormSpec::diagonal(inv.b_plus, inv.b_minus),
        Parity::Even => {
            if inv.signature.rem_euclid(8) != 0 {
                return Err(Error::NonRealizable(inv.signature));
            }
            let q = inv.signature / 8;
            let p = (inv.rank - 8 * q.unsigned_abs() as usize) / 2;
            FormSpec::even(p, q)
        }
    };
    Ok(spec)
}

/// The standard list member with the given invariants (indefinite forms only).
pub fn canonical_representative(inv: &FormInvariants) -> Result<GramForm> {
    GramForm::standard(canonical_spec(inv)?)
}

/// gcd of coordinates equals 1.
pub fn is_primitive(v: &LatticeVector) -> Result<bool> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.content().is_one())
}

/// Attempts to recover the `FormSpec` of a form that is literally a standard form.
pub fn recognize_standard(form: &GramForm) -> Option<FormSpec> {
    let g = form.gram();
    let n = form.dim();
    let mut spec = FormSpec::default();
    let mut i = 0;
    let at = |i: usize, j: usize| g[(i, j)].to_i64();
    while i < n && (at(i, i) == Some(1) || at(i, i) == Some(-1)) && (i + 1..n).all(|j| g[(i, j)].is_zero()) {
        if at(i, i) == Some(1) {
            spec.plus_ones += 1;
        } else {
            spec.minus_ones += 1;
        }
        i += 1;
    }
    while i + 1 < n && at(i, i) == Some(0) && at(i, i + 1) == Some(1) && at(i + 1, i + 1) == Some(0) {
        spec.hyperbolic += 1;
        i += 2;
    }
    let rest = n - i;
    if !rest.is_multiple_of(8) {
        return None;
    }
    if rest > 0 {
        let sign = if at(i, i) == Some(2) { 1 } else { -1 };
        spec.e8 = sign * (rest / 8) as i64;
    }
    match GramForm::standard(spec) {
        Ok(f) if f == *form => Some(spec),
        _ => None,
    }
}
