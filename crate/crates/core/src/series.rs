//! Polynomials in `t_1, t_2, …` truncated above a weight cap, `wt(t_k) = k`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{q, Rational};

/// Exponent of `t_{i+1}` at index `i`.
pub type Monomial = Vec<u32>;

pub fn weight(m: &[u32]) -> u32 {
    m.iter().enumerate().map(|(i, e)| (i as u32 + 1) * e).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauSeries {
    nvars: usize,
    cap: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl TauSeries {
    pub fn zero(nvars: usize, cap: u32) -> Self {
        TauSeries {
            nvars,
            cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rational, nvars: usize, cap: u32) -> Self {
        let mut s = Self::zero(nvars, cap);
        s.add_term(vec![0; nvars], c);
        s
    }

    pub fn one(nvars: usize, cap: u32) -> Self {
        Self::constant(Rational::one(), nvars, cap)
    }

    /// `t_k`, `k ≥ 1`.
    pub fn var(k: usize, nvars: usize, cap: u32) -> Self {
        let mut m = vec![0; nvars];
        m[k - 1] = 1;
        let mut s = Self::zero(nvars, cap);
        s.add_term(m, Rational::one());
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u32]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.nvars])
    }

    /// Terms above the cap are dropped.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.len(), self.nvars);
        if c.is_zero() || weight(&m) > self.cap {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn with_cap(&self, cap: u32) -> Self {
        let mut s = Self::zero(self.nvars, cap);
        for (m, c) in &self.terms {
            s.add_term(m.clone(), c.clone());
        }
        s
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut s = Self::zero(self.nvars, self.cap);
        if !c.is_zero() {
            s.terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        }
        s
    }

    /// `∂/∂t_k`.
    pub fn derivative(&self, k: usize) -> Self {
        let mut s = Self::zero(self.nvars, self.cap);
        if k == 0 || k > self.nvars {
            return s;
        }
        for (m, c) in &self.terms {
            if m[k - 1] > 0 {
                let mut n = m.clone();
                n[k - 1] -= 1;
                s.add_term(n, c * q(m[k - 1] as i64));
            }
        }
        s
    }

    /// `t_k · f`; `t_k` beyond the variable set multiplies to zero in the
    /// truncation only when `k` exceeds the cap.
    pub fn mul_var(&self, k: usize) -> Self {
        let mut s = Self::zero(self.nvars, self.cap);
        assert!(
            k >= 1 && (k <= self.nvars || k as u32 > self.cap),
            "t_{k} outside the variable set"
        );
        if k > self.nvars {
            return s;
        }
        for (m, c) in &self.terms {
            let mut n = m.clone();
            n[k - 1] += 1;
            s.add_term(n, c.clone());
        }
        s
    }

    pub fn depends_on(&self, k: usize) -> bool {
        k >= 1 && k <= self.nvars && self.terms.keys().any(|m| m[k - 1] > 0)
    }

    /// Weight-`w` part.
    pub fn homogeneous(&self, w: u32) -> Self {
        let mut s = Self::zero(self.nvars, self.cap);
        for (m, c) in &self.terms {
            if weight(m) == w {
                s.terms.insert(m.clone(), c.clone());
            }
        }
        s
    }

    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NonInvertible(
                "series with zero constant term".into(),
            ));
        }
        let inv0 = c0.recip();
        // f = c0(1 - u), 1/f = (1/c0) Σ u^n
        let mut u = self.scale(&-&inv0);
        u.add_term(vec![0; self.nvars], Rational::one());
        let mut total = Self::one(self.nvars, self.cap);
        let mut power = Self::one(self.nvars, self.cap);
        for _ in 0..self.cap {
            power = &power * &u;
            if power.is_zero() {
                break;
            }
            total = &total + &power;
        }
        Ok(total.scale(&inv0))
    }

    pub fn log(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::NonInvertible("log needs constant term 1".into()));
        }
        let mut u = self.clone();
        u.add_term(vec![0; self.nvars], -Rational::one());
        let mut total = Self::zero(self.nvars, self.cap);
        let mut power = Self::one(self.nvars, self.cap);
        for n in 1..=self.cap as i64 {
            power = &power * &u;
            if power.is_zero() {
                break;
            }
            let c = if n % 2 == 1 {
                Rational::one()
            } else {
                -Rational::one()
            } / q(n);
            total = &total + &power.scale(&c);
        }
        Ok(total)
    }

    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonInvertible("exp needs zero constant term".into()));
        }
        let mut total = Self::one(self.nvars, self.cap);
        let mut power = Self::one(self.nvars, self.cap);
        for n in 1..=self.cap as i64 {
            power = (&power * self).scale(&q(n).recip());
            if power.is_zero() {
                break;
            }
            total = &total + &power;
        }
        Ok(total)
    }
}

impl Add for &TauSeries {
    type Output = TauSeries;
    fn add(self, o: &TauSeries) -> TauSeries {
        assert_eq!(self.nvars, o.nvars);
        let mut s = self.with_cap(self.cap.min(o.cap));
        for (m, c) in &o.terms {
            s.add_term(m.clone(), c.clone());
        }
        s
    }
}

impl Sub for &TauSeries {
    type Output = TauSeries;
    fn sub(self, o: &TauSeries) -> TauSeries {
        self + &(-o)
    }
}

impl Neg for &TauSeries {
    type Output = TauSeries;
    fn neg(self) -> TauSeries {
        self.scale(&-Rational::one())
    }
}

impl Mul for &TauSeries {
    type Output = TauSeries;
    fn mul(self, o: &TauSeries) -> TauSeries {
        assert_eq!(self.nvars, o.nvars);
        let cap = self.cap.min(o.cap);
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            let wa = weight(ma);
            for (mb, cb) in &o.terms {
                if wa + weight(mb) > cap {
                    continue;
                }
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                *acc.entry(m).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        TauSeries {
            nvars: self.nvars,
            cap,
            terms: acc,
        }
    }
}

impl fmt::Display for TauSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by_key(|(m, _)| (weight(m), std::cmp::Reverse((*m).clone())));
        for (m, c) in ordered {
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| {
                    if *e == 1 {
                        format!("t{}", i + 1)
                    } else {
                        format!("t{}^{}", i + 1, e)
                    }
                })
                .collect();
            let neg = *c < Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            let sep = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            first = false;
            if vars.is_empty() {
                write!(f, "{sep}{mag}")?;
            } else if mag.is_one() {
                write!(f, "{sep}{}", vars.join("*"))?;
            } else {
                write!(f, "{sep}{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn truncation_and_calculus() {
        let t1 = TauSeries::var(1, 3, 4);
        let t3 = TauSeries::var(3, 3, 4);
        let p = &(&t1 * &t1) * &t3;
        assert!(p.is_zero());
        let f = &(&t1 * &t3) + &TauSeries::one(3, 4);
        assert_eq!(f.derivative(3), t1);
        assert_eq!(f.to_string(), "1 + t1*t3");
        let inv = f.inverse().unwrap();
        assert_eq!(&(&inv * &f) - &TauSeries::one(3, 4), TauSeries::zero(3, 4));
    }

    #[test]
    fn log_exp_roundtrip() {
        let t1 = TauSeries::var(1, 4, 6);
        let t2 = TauSeries::var(2, 4, 6);
        let u = &t1.scale(&frac(1, 3)) + &(&t2 * &t1).scale(&frac(-2, 5));
        let e = u.exp().unwrap();
        assert_eq!(e.log().unwrap(), u);
    }
}
