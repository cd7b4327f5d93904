//! The first Weyl algebra: differential operators with polynomial coefficients.
//!
//! Elements are stored normal ordered, every `x` to the left of every `∂`, so
//! two operators are equal exactly when their term maps are equal.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, XPolynomial};
use crate::rational::{binomial, falling, q, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DiffOperator {
    /// `(x-power, ∂-power) -> coefficient`.
    terms: BTreeMap<(u32, u32), Rational>,
}

impl DiffOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::term(0, 0, Rational::one())
    }

    pub fn x() -> Self {
        Self::term(1, 0, Rational::one())
    }

    pub fn d() -> Self {
        Self::term(0, 1, Rational::one())
    }

    /// `c · x^a ∂^b`.
    pub fn term(a: u32, b: u32, c: Rational) -> Self {
        let mut op = Self::zero();
        op.add_term(a, b, c);
        op
    }

    pub fn scalar(c: Rational) -> Self {
        Self::term(0, 0, c)
    }

    /// Constant-coefficient operator `Σ c_j ∂^j` from a polynomial in `∂`.
    pub fn from_d_poly(p: &Poly) -> Self {
        let mut op = Self::zero();
        for (j, c) in p.terms() {
            op.add_term(0, j, c.clone());
        }
        op
    }

    /// Multiplication operator by a polynomial in `x`.
    pub fn from_x_poly(p: &XPolynomial) -> Self {
        let mut op = Self::zero();
        for (j, c) in p.terms() {
            op.add_term(j, 0, c.clone());
        }
        op
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((a, b)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: u32, b: u32) -> Rational {
        self.terms
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &Rational)> {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (&(a, b), v) in &self.terms {
            out.add_term(a, b, v * c);
        }
        out
    }

    /// Highest power of `x` appearing, or `None` for zero.
    pub fn x_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(a, _)| a).max()
    }

    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, b)| b).max()
    }
}

/// Normal-ordered product `A ∘ B`.
///
/// Uses `∂^b x^c = Σ_k C(b,k) c!/(c-k)! x^{c-k} ∂^{b-k}`.
pub fn compose(lhs: &DiffOperator, rhs: &DiffOperator) -> DiffOperator {
    let mut out = DiffOperator::zero();
    for (&(a, b), ca) in &lhs.terms {
        for (&(c, e), cb) in &rhs.terms {
            let prod = ca * cb;
            for k in 0..=b.min(c) {
                let w = binomial(b as u64, k as u64) * falling(c as u64, k as u64);
                out.add_term(a + c - k, b - k + e, &prod * Rational::from_integer(w));
            }
        }
    }
    out
}

pub fn commutator(lhs: &DiffOperator, rhs: &DiffOperator) -> DiffOperator {
    &compose(lhs, rhs) - &compose(rhs, lhs)
}

/// Action on the polynomial representation.
pub fn apply(op: &DiffOperator, p: &XPolynomial) -> XPolynomial {
    let mut out = Poly::zero();
    for (&(a, b), c) in &op.terms {
        let dp = p.derivative_n(b);
        for (k, v) in dp.terms() {
            out.add_term(k + a, v * c);
        }
    }
    out
}

/// `σ_q(A) = Σ_j ad_{q(∂)}^j A / j!` for `q` given as a polynomial in `∂`.
///
/// Each `ad_{q(∂)}` strictly lowers the `x`-degree, so the series is summed
/// until the first vanishing term.
pub fn ad_exp_conjugate(qd: &Poly, op: &DiffOperator) -> Result<DiffOperator> {
    if !qd.coeff(0).is_zero() {
        return Err(Error::ConstantTerm);
    }
    let qop = DiffOperator::from_d_poly(qd);
    let mut total = op.clone();
    let mut term = op.clone();
    let mut j = 1i64;
    loop {
        term = commutator(&qop, &term).scale(&Rational::new(1.into(), j.into()));
        if term.is_zero() {
            break;
        }
        total = &total + &term;
        j += 1;
    }
    Ok(total)
}

/// Formal adjoint: `x* = x`, `∂* = -∂`, `(AB)* = B* A*`.
pub fn formal_adjoint(op: &DiffOperator) -> DiffOperator {
    let mut out = DiffOperator::zero();
    for (&(a, b), c) in &op.terms {
        let sign = if b % 2 == 0 { q(1) } else { q(-1) };
        let mut dpow = DiffOperator::zero();
        dpow.add_term(0, b, sign * c);
        out = &out + &compose(&dpow, &DiffOperator::term(a, 0, Rational::one()));
    }
    out
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&(a, b), c)| {
                let mut s = format!("({c})");
                match a {
                    0 => {}
                    1 => s.push_str("·x"),
                    _ => s.push_str(&format!("·x^{a}")),
                }
                match b {
                    0 => {}
                    1 => s.push_str("·∂"),
                    _ => s.push_str(&format!("·∂^{b}")),
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<'a> Add<&'a DiffOperator> for &'a DiffOperator {
    type Output = DiffOperator;
    fn add(self, rhs: &DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.terms {
            out.add_term(a, b, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a DiffOperator> for &'a DiffOperator {
    type Output = DiffOperator;
    fn sub(self, rhs: &DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.terms {
            out.add_term(a, b, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a DiffOperator> for &'a DiffOperator {
    type Output = DiffOperator;
    fn mul(self, rhs: &DiffOperator) -> DiffOperator {
        compose(self, rhs)
    }
}

impl Neg for &DiffOperator {
    type Output = DiffOperator;
    fn neg(self) -> DiffOperator {
        self.scale(&q(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn op(terms: &[(u32, u32, i64)]) -> DiffOperator {
        let mut o = DiffOperator::zero();
        for &(a, b, c) in terms {
            o.add_term(a, b, q(c));
        }
        o
    }

    #[test]
    fn composition_examples() {
        let d = DiffOperator::d();
        let x = DiffOperator::x();
        assert_eq!(compose(&d, &x), op(&[(1, 1, 1), (0, 0, 1)]));
        assert_eq!(compose(&x, &d), op(&[(1, 1, 1)]));
        let d3 = op(&[(0, 3, 1)]);
        assert_eq!(compose(&d3, &x), op(&[(1, 3, 1), (0, 2, 3)]));
    }

    #[test]
    fn commutator_examples() {
        let d = DiffOperator::d();
        let x = DiffOperator::x();
        assert_eq!(commutator(&d, &x), DiffOperator::identity());
        let h = op(&[(1, 1, 1)]);
        assert_eq!(commutator(&h, &x), x);
        assert_eq!(commutator(&op(&[(0, 3, 1)]), &x), op(&[(0, 2, 3)]));
    }

    #[test]
    fn apply_examples() {
        let h = op(&[(1, 1, 1)]);
        assert_eq!(
            apply(&h, &Poly::from_i64(&[0, 0, 0, 1])),
            Poly::from_i64(&[0, 0, 0, 3])
        );
        let l = op(&[(1, 1, 1), (0, 3, -1)]);
        assert_eq!(
            apply(&l, &Poly::from_i64(&[-2, 0, 0, 1])),
            Poly::from_i64(&[-6, 0, 0, 3])
        );
        assert!(apply(&DiffOperator::d(), &Poly::one()).is_zero());
    }

    #[test]
    fn conjugation_examples() {
        let qd = Poly::monomial(3, frac(-1, 3));
        assert_eq!(
            ad_exp_conjugate(&qd, &DiffOperator::d()).unwrap(),
            DiffOperator::d()
        );
        assert_eq!(
            ad_exp_conjugate(&qd, &DiffOperator::x()).unwrap(),
            op(&[(1, 0, 1), (0, 2, -1)])
        );
        assert_eq!(
            ad_exp_conjugate(&qd, &op(&[(1, 1, 1)])).unwrap(),
            op(&[(1, 1, 1), (0, 3, -1)])
        );
        let bad = Poly::from_i64(&[1, 0, 1]);
        assert_eq!(
            ad_exp_conjugate(&bad, &DiffOperator::x()),
            Err(Error::ConstantTerm)
        );
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(formal_adjoint(&DiffOperator::d()), op(&[(0, 1, -1)]));
        assert_eq!(
            formal_adjoint(&op(&[(1, 1, 1)])),
            op(&[(1, 1, -1), (0, 0, -1)])
        );
        assert_eq!(
            formal_adjoint(&op(&[(1, 1, 1), (0, 3, -1)])),
            op(&[(1, 1, -1), (0, 0, -1), (0, 3, 1)])
        );
    }
}
