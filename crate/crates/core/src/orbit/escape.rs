//! Reflection sequences along which one coordinate escapes to infinity,
//! witnessing that an orbit of `A(Γ)` in a nearly definite form is infinite.
//!
//! Two shapes are handled by explicit rules:
//!
//! * odd: `n<1> + <-1>` with basis `(H1..Hn, F)`, or its mirror `<1> + n<-1>`.
//!   Reflections in `ε1·Ha + ε2·Hb + F` (the two largest `|a_i|`) push `|b|`
//!   up to `2|a1| + 2|a2| + 3|b|`.
//! * even: `U + lE8` (or `U + l(-E8)`) with `v = η + a·x + b·y`. Reflections
//!   in `ω + k·x` with `ω` a root push `a` monotonically; three transition
//!   rules first bring `v` to `η ≠ 0, b ≠ 0`.
//!
//! Anything else falls back to a greedy search over small reflection vectors
//! that strictly grows the L1 norm.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::form::{recognize_standard, GramForm, E8_CARTAN};
use crate::isometry::reflection;
use crate::json;
use crate::matrix::LatticeVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// Odd-form step `γ = ε1 Ha + ε2 Hb + F`.
    Odd,
    /// Even-form step `γ = ω + k x` with `η ≠ 0, b ≠ 0`.
    Monotone,
    /// Even-form step that moves a vector into the monotone regime.
    Transition,
    /// Greedy L1-growing reflection.
    Generic,
}

/// How the tracked quantity evolves along a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Growth {
    /// `|coord[tracked]|` strictly increases.
    Magnitude,
    /// `coord[tracked]` strictly decreases over monotone steps.
    Decreasing,
    /// `coord[tracked]` strictly increases over monotone steps.
    Increasing,
    /// The L1 norm strictly increases.
    L1,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EscapeStep {
    pub gamma: LatticeVector,
    pub vector: LatticeVector,
    pub kind: StepKind,
}

#[derive(Clone, Debug)]
pub struct EscapeTrace {
    pub form: Arc<GramForm>,
    pub start: LatticeVector,
    pub steps: Vec<EscapeStep>,
    pub tracked_index: Option<usize>,
    pub growth: Growth,
}

impl EscapeTrace {
    pub fn vectors(&self) -> impl Iterator<Item = &LatticeVector> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.vector))
    }

    /// Coefficients at the tracked index, start included.
    pub fn tracked_values(&self) -> Vec<BigInt> {
        match self.tracked_index {
            Some(i) => self.vectors().map(|v| v[i].clone()).collect(),
            None => Vec::new(),
        }
    }

    /// Replays every step and checks the trace invariants.
    pub fn verify(&self) -> Result<()> {
        let form = &self.form;
        let norm = form.norm(&self.start)?;
        let characteristic = form.is_characteristic(&self.start)?;
        let content = self.start.content();
        let mut prev = &self.start;
        for (i, step) in self.steps.iter().enumerate() {
            let r = reflection(form, &step.gamma)?;
            if r.apply(prev)? != step.vector {
                return Err(Error::VerificationFailed(format!("step {} is not the stated reflection", i + 1)));
            }
            if form.norm(&step.vector)? != norm
                || form.is_characteristic(&step.vector)? != characteristic
                || step.vector.content() != content
            {
                return Err(Error::VerificationFailed(format!("step {} changed an isometry invariant", i + 1)));
            }
            prev = &step.vector;
        }
        let ok = match self.growth {
            Growth::Magnitude => {
                let vals = self.tracked_values();
                vals.windows(2).all(|w| w[1].abs() > w[0].abs())
            }
            Growth::Decreasing | Growth::Increasing => {
                let idx = self.tracked_index.expect("monotone traces track a coordinate");
                let mut ok = true;
                let mut prev = &self.start;
                for s in &self.steps {
                    if s.kind == StepKind::Monotone {
                        let (a0, a1) = (&prev[idx], &s.vector[idx]);
                        ok &= if self.growth == Growth::Decreasing { a1 < a0 } else { a1 > a0 };
                    }
                    prev = &s.vector;
                }
                ok
            }
            Growth::L1 => {
                let norms: Vec<BigInt> = self.vectors().map(LatticeVector::l1_norm).collect();
                norms.windows(2).all(|w| w[1] > w[0])
            }
        };
        if !ok {
            return Err(Error::VerificationFailed("tracked quantity is not strictly monotone".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "form": json::form(&self.form),
            "start": json::vector(&self.start),
            "steps": self.steps.iter().map(|s| json!({
                "gamma": json::vector(&s.gamma),
                "vector": json::vector(&s.vector),
                "kind": s.kind,
            })).collect::<Vec<_>>(),
            "tracked_index": self.tracked_index,
            "growth": self.growth,
        })
    }
}

/// Reflection image `v − (2(v·γ)/Q(γ))γ`; `None` if not integral.
fn reflect(form: &GramForm, gamma: &LatticeVector, q: &BigInt, v: &LatticeVector) -> Option<LatticeVector> {
    let two_dot = BigInt::from(2) * form.dot_unchecked(v, gamma);
    if !(&two_dot % q).is_zero() {
        return None;
    }
    Some(v.sub(&gamma.scale(&(two_dot / q))))
}

fn check_start(form: &GramForm, start: &LatticeVector) -> Result<()> {
    if start.dim() != form.dim() {
        return Err(Error::DimensionMismatch { expected: form.dim(), got: start.dim() });
    }
    if start.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// Index of `F` and the `H` indices for a nearly definite diagonal form.
pub(crate) fn odd_shape(form: &GramForm) -> Option<(usize, Vec<usize>)> {
    let spec = recognize_standard(form)?;
    if spec.hyperbolic != 0 || spec.e8 != 0 {
        return None;
    }
    let (m, n) = (spec.plus_ones, spec.minus_ones);
    if n == 1 && m >= 2 {
        Some((m, (0..m).collect()))
    } else if m == 1 && n >= 2 {
        Some((0, (1..=n).collect()))
    } else {
        None
    }
}

/// Number of E8 summands after a single leading `U`, with their sign.
pub(crate) fn even_shape(form: &GramForm) -> Option<i64> {
    let spec = recognize_standard(form)?;
    (spec.plus_ones == 0 && spec.minus_ones == 0 && spec.hyperbolic == 1 && spec.e8 != 0).then_some(spec.e8)
}

fn sign(x: &BigInt) -> BigInt {
    if x.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    }
}

pub fn escape_odd(form: &Arc<GramForm>, start: &LatticeVector, steps: usize) -> Result<EscapeTrace> {
    check_start(form, start)?;
    let (f_idx, h_idx) = odd_shape(form).ok_or_else(|| {
        Error::UnsupportedShape("expected n<1>+<-1> or <1>+n<-1> with n >= 2 in standard basis".into())
    })?;
    let mut cur = start.clone();
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let mut order = h_idx.clone();
        order.sort_by(|&i, &j| cur[j].abs().cmp(&cur[i].abs()).then(i.cmp(&j)));
        let (i1, i2) = (order[0], order[1]);
        let b = &cur[f_idx];
        let eps = |a: &BigInt| -> BigInt {
            if a.is_zero() {
                BigInt::one()
            } else if b.is_zero() {
                -sign(a)
            } else {
                -sign(a) * sign(b)
            }
        };
        let mut gamma = LatticeVector::zero(form.dim());
        gamma.0[i1] = eps(&cur[i1]);
        gamma.0[i2] = eps(&cur[i2]);
        gamma.0[f_idx] = BigInt::one();
        let q = form.norm(&gamma)?;
        let next = reflect(form, &gamma, &q, &cur).expect("unit-norm reflection is integral");
        out.push(EscapeStep { gamma, vector: next.clone(), kind: StepKind::Odd });
        cur = next;
    }
    Ok(EscapeTrace { form: form.clone(), start: start.clone(), steps: out, tracked_index: Some(f_idx), growth: Growth::Magnitude })
}

/// The 240 roots of E8 in the simple-root basis of [`E8_CARTAN`].
pub fn e8_roots() -> &'static [[i64; 8]] {
    static ROOTS: OnceLock<Vec<[i64; 8]>> = OnceLock::new();
    ROOTS.get_or_init(|| {
        let pair = |v: &[i64; 8], i: usize| -> i64 { (0..8).map(|j| E8_CARTAN[i][j] * v[j]).sum() };
        let mut roots: std::collections::BTreeSet<[i64; 8]> = Default::default();
        let mut stack: Vec<[i64; 8]> = (0..8)
            .map(|i| {
                let mut v = [0; 8];
                v[i] = 1;
                v
            })
            .collect();
        while let Some(v) = stack.pop() {
            if !roots.insert(v) {
                continue;
            }
            for i in 0..8 {
                let c = pair(&v, i);
                let mut w = v;
                w[i] -= c;
                if !roots.contains(&w) {
                    stack.push(w);
                }
            }
        }
        // Positive roots first, each followed by nothing special: lexicographic.
        roots.into_iter().rev().collect()
    })
}

pub fn escape_even(form: &Arc<GramForm>, start: &LatticeVector, steps: usize) -> Result<EscapeTrace> {
    check_start(form, start)?;
    let copies = even_shape(form)
        .ok_or_else(|| Error::UnsupportedShape("expected U+lE8 or U+l(-E8) in standard basis".into()))?;
    let dim = form.dim();
    let roots: Vec<LatticeVector> = (0..copies.unsigned_abs() as usize)
        .flat_map(|c| {
            e8_roots().iter().map(move |r| {
                let mut v = LatticeVector::zero(dim);
                for (j, &x) in r.iter().enumerate() {
                    v.0[2 + 8 * c + j] = BigInt::from(x);
                }
                v
            })
        })
        .collect();
    let root_norm = BigInt::from(if copies > 0 { 2 } else { -2 });
    let x = LatticeVector::unit(dim, 0);
    let y = LatticeVector::unit(dim, 1);
    let eta_of = |v: &LatticeVector| {
        let mut e = v.clone();
        e.0[0] = BigInt::zero();
        e.0[1] = BigInt::zero();
        e
    };

    let mut cur = start.clone();
    let mut out = Vec::with_capacity(steps);
    let mut growth = None;
    for _ in 0..steps {
        let eta = eta_of(&cur);
        let (a, b) = (cur[0].clone(), cur[1].clone());
        let step = if !eta.is_zero() && !b.is_zero() {
            // Monotone regime: the x-coefficient moves strictly in one direction.
            let decreasing = (&b * &root_norm).is_positive();
            growth.get_or_insert(if decreasing { Growth::Decreasing } else { Growth::Increasing });
            let mut found = None;
            'roots: for w in &roots {
                if form.dot_unchecked(w, &eta).is_zero() {
                    continue;
                }
                for k in (0..=4096i64).flat_map(|m| if m == 0 { vec![0] } else { vec![m, -m] }) {
                    let gamma = w.add(&x.scale(&BigInt::from(k)));
                    let next = reflect(form, &gamma, &root_norm, &cur).expect("root reflections are integral");
                    let moved = if decreasing { next[0] < a } else { next[0] > a };
                    if moved && !eta_of(&next).is_zero() {
                        found = Some(EscapeStep { gamma, vector: next, kind: StepKind::Monotone });
                        break 'roots;
                    }
                }
            }
            found
        } else if !eta.is_zero() {
            // b = 0: reflect in ω + y to create a nonzero y-coefficient, keeping η ≠ 0.
            roots.iter().find_map(|w| {
                if form.dot_unchecked(w, &eta).is_zero() {
                    return None;
                }
                let gamma = w.add(&y);
                let next = reflect(form, &gamma, &root_norm, &cur)?;
                (!next[1].is_zero() && !eta_of(&next).is_zero())
                    .then_some(EscapeStep { gamma, vector: next, kind: StepKind::Transition })
            })
        } else {
            // η = 0: any root with k = 1 introduces η ≠ 0.
            let w = &roots[0];
            let gamma = if !b.is_zero() { w.add(&x) } else { w.add(&y) };
            let next = reflect(form, &gamma, &root_norm, &cur).expect("root reflections are integral");
            Some(EscapeStep { gamma, vector: next, kind: StepKind::Transition })
        };
        let step = step.ok_or_else(|| Error::BudgetExhausted("no admissible root reflection found".into()))?;
        cur = step.vector.clone();
        out.push(step);
    }
    Ok(EscapeTrace {
        form: form.clone(),
        start: start.clone(),
        steps: out,
        tracked_index: Some(0),
        growth: growth.unwrap_or(Growth::Decreasing),
    })
}

/// Greedy escape for arbitrary forms: reflections in vectors with entries in
/// {-1, 0, 1} and norm ±1 or ±2, choosing the image of largest L1 norm.
pub fn escape_generic(form: &Arc<GramForm>, start: &LatticeVector, steps: usize) -> Result<EscapeTrace> {
    check_start(form, start)?;
    let dim = form.dim();
    if dim > 8 {
        return Err(Error::BudgetExhausted("generic reflection search is limited to rank 8".into()));
    }
    let mut candidates = Vec::new();
    let mut coords = vec![-1i64; dim];
    loop {
        let gamma = LatticeVector::from_i64s(&coords);
        if let Ok(q) = form.norm(&gamma) {
            if !q.is_zero() && q.abs() <= BigInt::from(2) && reflection(form, &gamma).is_ok() {
                candidates.push((gamma, q));
            }
        }
        let mut i = 0;
        while i < dim && coords[i] == 1 {
            coords[i] = -1;
            i += 1;
        }
        if i == dim {
            break;
        }
        coords[i] += 1;
    }
    let mut cur = start.clone();
    let mut out = Vec::with_capacity(steps);
    for s in 0..steps {
        let best = candidates
            .iter()
            .filter_map(|(g, q)| reflect(form, g, q, &cur).map(|w| (w.l1_norm(), g, w)))
            .max_by(|x, y| x.0.cmp(&y.0));
        match best {
            Some((l1, gamma, next)) if l1 > cur.l1_norm() => {
                out.push(EscapeStep { gamma: gamma.clone(), vector: next.clone(), kind: StepKind::Generic });
                cur = next;
            }
            _ => return Err(Error::BudgetExhausted(format!("generic reflection search stalled after {s} steps"))),
        }
    }
    Ok(EscapeTrace { form: form.clone(), start: start.clone(), steps: out, tracked_index: None, growth: Growth::L1 })
}

/// Dispatches on the recognized form shape.
pub fn escape(form: &Arc<GramForm>, start: &LatticeVector, steps: usize) -> Result<EscapeTrace> {
    if odd_shape(form).is_some() {
        escape_odd(form, start, steps)
    } else if even_shape(form).is_some() {
        escape_even(form, start, steps)
    } else {
        escape_generic(form, start, steps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(c)
    }

    fn arc(desc: &str) -> Arc<GramForm> {
        Arc::new(GramForm::parse(desc).unwrap())
    }

    #[test]
    fn e8_root_count_and_norms() {
        let roots = e8_roots();
        assert_eq!(roots.len(), 240);
        let f = GramForm::parse("E8").unwrap();
        for r in roots {
            let lv = LatticeVector::from_i64s(r);
            assert_eq!(f.norm(&lv).unwrap(), BigInt::from(2));
        }
    }

    #[test]
    fn odd_trace_from_f() {
        let f = arc("2<1>+<-1>");
        let t = escape_odd(&f, &v(&[0, 0, 1]), 3).unwrap();
        let fs: Vec<BigInt> = t.tracked_values();
        assert_eq!(fs[..3], [BigInt::from(1), BigInt::from(3), BigInt::from(17)]);
        assert_eq!(t.steps[0].vector, v(&[2, 2, 3]));
        t.verify().unwrap();
    }

    #[test]
    fn odd_trace_from_h1() {
        let f = arc("2<1>+<-1>");
        let t = escape_odd(&f, &v(&[1, 0, 0]), 1).unwrap();
        // R(H1) = -H1 - 2ε1ε2 H2 - 2ε1 F
        let g = &t.steps[0].gamma;
        let (e1, e2) = (g[0].clone(), g[1].clone());
        let expected = LatticeVector(vec![BigInt::from(-1), BigInt::from(-2) * &e1 * &e2, BigInt::from(-2) * &e1]);
        assert_eq!(t.steps[0].vector, expected);
        assert!(!t.steps[0].vector[2].is_zero());
    }

    #[test]
    fn mirrored_odd_form() {
        let f = arc("<1>+2<-1>");
        let t = escape_odd(&f, &v(&[3, 1, 1]), 10).unwrap();
        assert_eq!(t.tracked_index, Some(0));
        t.verify().unwrap();
        for s in &t.steps {
            assert_eq!(f.norm(&s.vector).unwrap(), BigInt::from(7));
        }
    }

    #[test]
    fn odd_shape_rejections() {
        assert!(matches!(escape_odd(&arc("2U"), &v(&[1, 0, 0, 0]), 1), Err(Error::UnsupportedShape(_))));
        assert!(matches!(escape_odd(&arc("<1>+<-1>"), &v(&[1, 0]), 1), Err(Error::UnsupportedShape(_))));
        assert!(matches!(escape_odd(&arc("2<1>+2<-1>"), &v(&[1, 0, 0, 0]), 1), Err(Error::UnsupportedShape(_))));
        assert_eq!(escape_odd(&arc("2<1>+<-1>"), &v(&[0, 0, 0]), 1).unwrap_err(), Error::ZeroVector);
    }

    #[test]
    fn even_monotone_update_rule() {
        let f = arc("U+E8");
        let mut start = LatticeVector::zero(10);
        start.0[0] = 2.into();
        start.0[1] = 3.into();
        start.0[2] = 1.into();
        let t = escape_even(&f, &start, 5).unwrap();
        t.verify().unwrap();
        let mut prev = start.clone();
        for s in &t.steps {
            assert_eq!(s.kind, StepKind::Monotone);
            let omega = {
                let mut w = s.gamma.clone();
                w.0[0] = BigInt::zero();
                w
            };
            let k = s.gamma[0].clone();
            let eta = {
                let mut e = prev.clone();
                e.0[0] = BigInt::zero();
                e.0[1] = BigInt::zero();
                e
            };
            let c = f.dot(&omega, &eta).unwrap() + &k * &prev[1];
            assert_eq!(s.vector[0], &prev[0] - &c * &k);
            assert_eq!(s.vector[1], prev[1]);
            prev = s.vector.clone();
        }
        assert_eq!(t.growth, Growth::Decreasing);
    }

    #[test]
    fn even_case_two_transition() {
        let f = arc("U+E8");
        let mut start = LatticeVector::zero(10);
        start.0[5] = 1.into();
        let t = escape_even(&f, &start, 3).unwrap();
        let first = &t.steps[0];
        assert_eq!(first.kind, StepKind::Transition);
        let mut omega = first.gamma.clone();
        omega.0[1] = BigInt::zero();
        assert_eq!(first.vector[1], -f.dot(&omega, &start).unwrap());
        assert!(!first.vector[1].is_zero());
        assert_eq!(t.steps[1].kind, StepKind::Monotone);
        t.verify().unwrap();
    }

    #[test]
    fn even_case_three_transition() {
        let f = arc("U+E8");
        for (a, b) in [(0, 2), (5, -1), (3, 0)] {
            let mut start = LatticeVector::zero(10);
            start.0[0] = a.into();
            start.0[1] = b.into();
            let t = escape_even(&f, &start, 4).unwrap();
            assert_eq!(t.steps[0].kind, StepKind::Transition);
            assert!(t.steps[1..].iter().all(|s| s.kind == StepKind::Monotone), "{a} {b}");
            t.verify().unwrap();
        }
    }

    #[test]
    fn even_characteristic_status_preserved() {
        // U+E8 is even: characteristic vectors are exactly the 2-divisible ones.
        let f = arc("U+E8");
        let start = LatticeVector::from_i64s(&[2, -4, 0, 2, 0, 0, 0, 0, 0, 2]);
        assert!(f.is_characteristic(&start).unwrap());
        let t = escape_even(&f, &start, 6).unwrap();
        for s in &t.steps {
            assert!(f.is_characteristic(&s.vector).unwrap());
        }
    }

    #[test]
    fn mirrored_even_form() {
        let f = arc("U+(-E8)");
        let mut start = LatticeVector::zero(10);
        start.0[0] = 1.into();
        start.0[1] = 1.into();
        start.0[4] = (-1).into();
        let t = escape_even(&f, &start, 8).unwrap();
        assert_eq!(t.growth, Growth::Increasing);
        t.verify().unwrap();
    }

    #[test]
    fn generic_escape_in_two_u() {
        let f = arc("2U");
        let t = escape_generic(&f, &v(&[1, 0, 0, 0]), 10).unwrap();
        t.verify().unwrap();
    }
}
