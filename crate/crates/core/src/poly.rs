//! Sparse multivariate polynomials with rational coefficients, enough for
//! mechanical coefficient matching and constraint propagation.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vectors map to nonzero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn int(nvars: usize, c: i64) -> Self {
        Poly::constant(nvars, BigRational::from_integer(c.into()))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(e, BigRational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    /// The constant term.
    pub fn constant_term(&self) -> BigRational {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        self.terms.keys().all(|e| e.iter().all(|&d| d == 0)).then(|| self.constant_term())
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::int(self.nvars, 1), |acc, _| &acc * self)
    }

    /// Replaces variable `i` by `value`.
    pub fn substitute(&self, i: usize, value: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let d = std::mem::take(&mut rest[i]);
            let mut mono = Poly::zero(self.nvars);
            mono.add_term(rest, c.clone());
            out = &out + &(&mono * &value.pow(d));
        }
        out
    }

    pub fn substitute_all(&self, values: &BTreeMap<usize, BigRational>) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let mut coeff = c.clone();
            for (&i, v) in values {
                let d = std::mem::take(&mut rest[i]);
                for _ in 0..d {
                    coeff *= v;
                }
            }
            out.add_term(rest, coeff);
        }
        out
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &d) in point.iter().zip(e) {
                for _ in 0..d {
                    t *= x;
                }
            }
            total += t;
        }
        total
    }

    /// Coefficient of `var^deg` viewed as a polynomial in the other variables.
    pub fn coefficient(&self, var: usize, deg: u32) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == deg {
                let mut rest = e.clone();
                rest[var] = 0;
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// If the polynomial is `c·x_i + d` with `c ≠ 0`, returns `(i, −d/c)`.
    pub fn solve_linear(&self) -> Option<(usize, BigRational)> {
        let mut var = None;
        let mut c = BigRational::zero();
        for (e, v) in &self.terms {
            let deg: u32 = e.iter().sum();
            match deg {
                0 => {}
                1 => {
                    let i = e.iter().position(|&d| d == 1)?;
                    if var.is_some() {
                        return None;
                    }
                    var = Some(i);
                    c = v.clone();
                }
                _ => return None,
            }
        }
        let i = var?;
        Some((i, -self.constant_term() / c))
    }

    /// Renders with the supplied variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &d)| d > 0)
                .map(|(i, &d)| if d == 1 { names[i].clone() } else { format!("{}^{d}", names[i]) })
                .collect();
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff = if mag.is_integer() { mag.to_integer().to_string() } else { mag.to_string() };
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => out.push_str(&coeff),
                (false, true) => out.push_str(&mono.join("*")),
                (false, false) => out.push_str(&format!("{coeff}*{}", mono.join("*"))),
            }
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("v{i}")).collect();
        f.write_str(&self.display_with(&names))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &-rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_substitution() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = &(&x + &y) * &(&x - &y);
        let q = &x.pow(2) - &y.pow(2);
        assert_eq!(p, q);
        assert!((&p - &q).is_zero());
        let s = p.substitute(1, &Poly::int(2, 3));
        assert_eq!(s, &x.pow(2) - &Poly::int(2, 9));
        assert_eq!(s.eval(&[rat(4), rat(0)]), rat(7));
        assert_eq!(p.coefficient(0, 2), Poly::int(2, 1));
    }

    #[test]
    fn linear_solve() {
        let x = Poly::var(3, 2);
        let p = &x.scale(&rat(2)) + &Poly::int(3, -6);
        assert_eq!(p.solve_linear(), Some((2, rat(3))));
        let q = &x * &Poly::var(3, 0);
        assert_eq!(q.solve_linear(), None);
    }

    #[test]
    fn display() {
        let names: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let p = &(&Poly::var(2, 0) * &Poly::var(2, 1)) - &Poly::int(2, 1);
        assert_eq!(p.display_with(&names), "a*b - 1");
    }
}
