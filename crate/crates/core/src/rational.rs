//! Exact rational scalars and the small combinatorial helpers used everywhere.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    falling(n, k) / factorial(k)
}

/// Generalized binomial `C(a, k)` for rational `a`.
pub fn binomial_q(a: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * (a - q(i as i64)) / q(i as i64 + 1);
    }
    acc
}

/// `(2k-1)!!` with the convention `(-1)!! = 1`.
pub fn double_factorial_odd(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * (2 * i - 1))
}

/// `[numerator, denominator]` as decimal strings.
pub fn to_pair(r: &Rational) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p"`, `"p/q"` or a finite decimal like `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((i, f)) = s.split_once('.') {
        let neg = i.starts_with('-');
        let ip: BigInt = if i.is_empty() || i == "-" || i == "+" {
            BigInt::zero()
        } else {
            i.parse().map_err(|_| bad())?
        };
        if !f.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = num_traits::pow(BigInt::from(10), f.len());
        let fp: BigInt = if f.is_empty() {
            BigInt::zero()
        } else {
            f.parse().map_err(|_| bad())?
        };
        let mag = ip.abs() * &scale + fp;
        let n = if neg { -mag } else { mag };
        return Ok(Rational::new(n, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinatorics() {
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(falling(6, 3), BigInt::from(120));
        assert_eq!(falling(2, 3), BigInt::zero());
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(double_factorial_odd(0), BigInt::one());
        assert_eq!(double_factorial_odd(3), BigInt::from(15));
        assert_eq!(binomial_q(&q(-2), 3), q(-4));
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("-1/3").unwrap(), frac(-1, 3));
        assert_eq!(parse_rational("7").unwrap(), q(7));
        assert_eq!(parse_rational("-0.25").unwrap(), frac(-1, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(to_pair(&frac(6, -4)), ["-3".to_string(), "2".to_string()]);
    }
}
