//! Univariate polynomials with exact rational coefficients.
//!
//! The same type carries polynomials in `x` (the families `P_n`) and in the
//! lattice site `s` (coefficients of difference operators).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{binomial, falling, q, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: BTreeMap<u32, Rational>,
}

/// Polynomial in `x`.
pub type XPolynomial = Poly;
/// Polynomial in the site index `s`.
pub type IndexFunction = Poly;

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::monomial(0, c)
    }

    pub fn monomial(deg: u32, c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(deg, c);
        p
    }

    /// The variable itself.
    pub fn var() -> Self {
        Poly::monomial(1, Rational::one())
    }

    /// Builds from ascending coefficients.
    pub fn from_coeffs<I: IntoIterator<Item = Rational>>(cs: I) -> Self {
        let mut p = Poly::zero();
        for (i, c) in cs.into_iter().enumerate() {
            p.add_term(i as u32, c);
        }
        p
    }

    pub fn from_i64(cs: &[i64]) -> Self {
        Poly::from_coeffs(cs.iter().map(|&c| q(c)))
    }

    pub fn add_term(&mut self, deg: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(deg).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&deg);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn leading(&self) -> Option<(u32, &Rational)> {
        self.coeffs.iter().next_back().map(|(&k, v)| (k, v))
    }

    pub fn coeff(&self, deg: u32) -> Rational {
        self.coeffs
            .get(&deg)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(&k, v)| (k, v))
    }

    /// Dense ascending coefficient vector (empty for the zero polynomial).
    pub fn dense(&self) -> Vec<Rational> {
        match self.degree() {
            None => Vec::new(),
            Some(n) => (0..=n).map(|i| self.coeff(i)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    /// Multiplies by `var^k`.
    pub fn shift_degree(&self, k: u32) -> Self {
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&d, v)| (d + k, v.clone()))
                .collect(),
        }
    }

    /// `k`-th derivative.
    pub fn derivative_n(&self, k: u32) -> Self {
        let mut out = Poly::zero();
        for (&d, c) in &self.coeffs {
            if d >= k {
                out.add_term(
                    d - k,
                    c * Rational::from_integer(falling(d as u64, k as u64)),
                );
            }
        }
        out
    }

    pub fn derivative(&self) -> Self {
        self.derivative_n(1)
    }

    /// `p(var + a)` for an integer offset.
    pub fn translate(&self, a: i64) -> Self {
        if a == 0 {
            return self.clone();
        }
        let mut out = Poly::zero();
        let qa = q(a);
        for (&d, c) in &self.coeffs {
            let mut pw = Rational::one();
            for j in 0..=d {
                let k = d - j;
                out.add_term(
                    k,
                    c * Rational::from_integer(binomial(d as u64, j as u64)) * &pw,
                );
                pw *= &qa;
            }
        }
        out
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut last = match self.degree() {
            None => return acc,
            Some(n) => n,
        };
        for (&d, c) in self.coeffs.iter().rev() {
            for _ in d..last {
                acc *= x;
            }
            acc += c;
            last = d;
        }
        for _ in 0..last {
            acc *= x;
        }
        acc
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Poly::one(), |acc, _| &acc * self)
    }
}

impl Poly {
    /// Renders with `var` as the variable name.
    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .rev()
            .map(|(&d, c)| match d {
                0 => format!("{c}"),
                1 => format!("({c})*{var}"),
                _ => format!("({c})*{var}^{d}"),
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_in("x"))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (&d, c) in &rhs.coeffs {
            out.add_term(d, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (&d, c) in &rhs.coeffs {
            out.add_term(d, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (&a, ca) in &self.coeffs {
            for (&b, cb) in &rhs.coeffs {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
