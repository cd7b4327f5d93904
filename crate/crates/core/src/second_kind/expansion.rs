//! Formal large-`x` expansions of `ν(s, x)` in `y = x^{1/d}`.
//!
//! Around the saddle `z = y`,
//! `ν(s) ≈ √(2π/d) · exp(d/(d+1) y^{d+1}) · y^{-s-1-(d-1)/2} · Σ_k c_k y^{-(d+1)k}`
//! and only the tail `Σ c_k y^{-(d+1)k}` (with `c_0 = 1`) is kept exactly.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::family::FamilyConfig;
use crate::rational::{binomial, binomial_q, double_factorial_odd, factorial, frac, q, Rational};
use crate::report::CheckReport;

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticExpansion {
    pub d: usize,
    pub s: i64,
    /// Coefficient of `y^{d+1}` in the exponent, `d/(d+1)`.
    pub exponent_coeff: Rational,
    /// `-s-1-(d-1)/2`.
    pub power_shift: Rational,
    /// Offset (≤ 0) to coefficient.
    pub tail: BTreeMap<i64, Rational>,
    /// Most negative offset that is known exactly.
    pub floor: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `s → s-1` via `∂_x`.
    Lowering,
    /// `s → s+1` via `ν(s+1) = (xν(s) − ν(s−d))/(s+1)`.
    Recurrence,
}

impl AsymptoticExpansion {
    pub fn coeff(&self, offset: i64) -> Rational {
        self.tail
            .get(&offset)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Number of complete `(d+1)`-steps below the leading term.
    pub fn order(&self) -> usize {
        (-self.floor) as usize / (self.d + 1)
    }

    /// Tail coefficient of `ζ^{-k}` with `ζ = d/(d+1) · y^{d+1}`.
    pub fn zeta_coeff(&self, k: usize) -> Rational {
        let n = (self.d + 1) as i64;
        let mut c = self.coeff(-n * k as i64);
        for _ in 0..k {
            c *= frac(self.d as i64, n);
        }
        c
    }

    /// Offsets carrying a nonzero coefficient off the lattice `(d+1)ℤ`.
    pub fn lattice_violations(&self) -> Vec<i64> {
        let n = (self.d + 1) as i64;
        self.tail
            .iter()
            .filter(|(f, c)| *f % n != 0 && !c.is_zero())
            .map(|(f, _)| *f)
            .collect()
    }

    fn truncated(mut self) -> Self {
        let floor = self.floor;
        self.tail.retain(|f, c| *f >= floor && !c.is_zero());
        self
    }
}

fn prefactor(d: usize, s: i64) -> (Rational, Rational) {
    (
        frac(d as i64, d as i64 + 1),
        q(-s - 1) - frac(d as i64 - 1, 2),
    )
}

/// Series in `(ε, w)` truncated at `ε^{n}`; index `[e]` is a polynomial in `w`.
type Bivariate = Vec<BTreeMap<usize, Rational>>;

fn bi_mul(a: &Bivariate, b: &Bivariate, n: usize) -> Bivariate {
    let mut out: Bivariate = vec![BTreeMap::new(); n + 1];
    for (ea, pa) in a.iter().enumerate() {
        for (eb, pb) in b.iter().enumerate().take(n + 1 - ea) {
            for (wa, ca) in pa {
                for (wb, cb) in pb {
                    *out[ea + eb].entry(wa + wb).or_insert_with(Rational::zero) += ca * cb;
                }
            }
        }
    }
    out
}

/// Exact saddle-point tail for Gould-Hopper `q`, through `y^{-(d+1)·order}`.
pub fn asymptotic_expansion(
    cfg: &FamilyConfig,
    s: i64,
    order: usize,
) -> Result<AsymptoticExpansion> {
    if !cfg.is_gould_hopper() {
        return Err(Error::InvalidConfig(
            "asymptotic expansion needs q = -z^{d+1}/(d+1)".into(),
        ));
    }
    let d = cfg.d();
    let n = 2 * order;
    let dp1 = d as u64 + 1;

    // A = Σ_{k=3}^{d+1} −C(d+1,k)/(d+1) w^k ε^{k−2}
    let mut a: Bivariate = vec![BTreeMap::new(); n + 1];
    for k in 3..=d + 1 {
        if k - 2 <= n {
            let c = -Rational::from_integer(binomial(dp1, k as u64)) / q(dp1 as i64);
            a[k - 2].insert(k, c);
        }
    }
    // exp(A): A has no ε^0 part, so n+1 terms suffice.
    let mut one: Bivariate = vec![BTreeMap::new(); n + 1];
    one[0].insert(0, Rational::one());
    let mut exp_a = one.clone();
    let mut power = one;
    for j in 1..=n {
        power = bi_mul(&power, &a, n);
        for (e, p) in power.iter().enumerate() {
            for (w, c) in p {
                *exp_a[e].entry(*w).or_insert_with(Rational::zero) +=
                    c / Rational::from_integer(factorial(j as u64));
            }
        }
    }
    // (1 + wε)^{-s-1}
    let mut bin: Bivariate = vec![BTreeMap::new(); n + 1];
    let top = q(-s - 1);
    for (j, slot) in bin.iter_mut().enumerate() {
        slot.insert(j, binomial_q(&top, j as u64));
    }
    let series = bi_mul(&exp_a, &bin, n);

    let mut tail = BTreeMap::new();
    for (e, p) in series.iter().enumerate() {
        let mut total = Rational::zero();
        for (w, c) in p {
            if w % 2 == 0 {
                let m = (w / 2) as u64;
                let mut g = Rational::from_integer(double_factorial_odd(m));
                for _ in 0..m {
                    g /= q(d as i64);
                }
                total += c * g;
            }
        }
        if e % 2 == 1 {
            if !total.is_zero() {
                return Err(Error::InvalidConfig(format!("odd saddle term at ε^{e}")));
            }
            continue;
        }
        if !total.is_zero() {
            tail.insert(-((dp1 as i64) * (e as i64 / 2)), total);
        }
    }
    let (exponent_coeff, power_shift) = prefactor(d, s);
    Ok(AsymptoticExpansion {
        d,
        s,
        exponent_coeff,
        power_shift,
        tail,
        floor: -((dp1 * order as u64) as i64),
    })
}

fn lower(e: &AsymptoticExpansion) -> AsymptoticExpansion {
    let dp1 = e.d as i64 + 1;
    let dq = q(e.d as i64);
    let mut tail = BTreeMap::new();
    for f in e.floor..=0 {
        let b = e.coeff(f) + (&e.power_shift + q(f + dp1)) / &dq * e.coeff(f + dp1);
        if !b.is_zero() {
            tail.insert(f, b);
        }
    }
    AsymptoticExpansion {
        d: e.d,
        s: e.s - 1,
        exponent_coeff: e.exponent_coeff.clone(),
        power_shift: &e.power_shift + Rational::one(),
        tail,
        floor: e.floor,
    }
    .truncated()
}

/// Moves an expansion one step in `s`. Raising consumes `d+1` offsets of
/// precision.
pub fn propagate_expansion(
    e: &AsymptoticExpansion,
    relation: Relation,
) -> Result<AsymptoticExpansion> {
    match relation {
        Relation::Lowering => Ok(lower(e)),
        Relation::Recurrence => {
            if e.s == -1 {
                return Err(Error::DivisionByZero(e.s));
            }
            let dp1 = e.d as i64 + 1;
            if e.floor + dp1 > 0 {
                return Err(Error::InsufficientDepth("raising needs order ≥ 1".into()));
            }
            let mut shifted = e.clone();
            for _ in 0..e.d {
                shifted = lower(&shifted);
            }
            let s1 = q(e.s + 1);
            let floor = e.floor + dp1;
            let mut tail = BTreeMap::new();
            for f in floor..=0 {
                let g = f - dp1;
                let b = (e.coeff(g) - shifted.coeff(g)) / &s1;
                if !b.is_zero() {
                    tail.insert(f, b);
                }
            }
            let (exponent_coeff, power_shift) = prefactor(e.d, e.s + 1);
            Ok(AsymptoticExpansion {
                d: e.d,
                s: e.s + 1,
                exponent_coeff,
                power_shift,
                tail,
                floor,
            })
        }
    }
}

/// Offsets where `−ν(s−d−1) + xν(s−1) − sν(s)` fails to vanish.
pub fn ode_residual(e: &AsymptoticExpansion) -> BTreeMap<i64, Rational> {
    let dp1 = e.d as i64 + 1;
    let once = lower(e);
    let mut many = once.clone();
    for _ in 0..e.d {
        many = lower(&many);
    }
    let s = q(e.s);
    let mut out = BTreeMap::new();
    for f in e.floor..=0 {
        let r = once.coeff(f) - many.coeff(f) - &s * e.coeff(f + dp1);
        if !r.is_zero() {
            out.insert(f, r);
        }
    }
    out
}

/// Leading coefficient, lattice support and differential equation of one
/// expansion.
pub fn expansion_check(e: &AsymptoticExpansion) -> CheckReport {
    let mut rep = CheckReport::new(format!("expansion d={} s={}", e.d, e.s));
    rep.expect(
        e.coeff(0).is_one(),
        || "leading".into(),
        "leading tail coefficient is not 1",
        &[e.coeff(0)],
    );
    let bad = e.lattice_violations();
    rep.expect(
        bad.is_empty(),
        || "lattice".into(),
        &format!("off-lattice offsets {bad:?}"),
        &[],
    );
    let ode = ode_residual(e);
    if ode.is_empty() {
        rep.case_ok();
    }
    for (f, r) in ode {
        rep.fail(format!("ode offset {f}"), "nonzero residual", &[r]);
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn airy_u(k: usize) -> Rational {
        let mut u = Rational::one();
        for j in 0..k as i64 {
            u = u * q((6 * j + 5) * (6 * j + 1)) / q(72 * (j + 1));
        }
        u
    }

    #[test]
    fn airy_tail() {
        let gh = FamilyConfig::gould_hopper(2);
        let e = asymptotic_expansion(&gh, -1, 6).unwrap();
        assert_eq!(e.zeta_coeff(1), frac(5, 72));
        assert_eq!(e.zeta_coeff(2), frac(385, 10368));
        for k in 0..=6 {
            assert_eq!(e.zeta_coeff(k), airy_u(k));
        }
        let e2 = asymptotic_expansion(&gh, -2, 6).unwrap();
        for k in 0..=6 {
            let v = airy_u(k) * q(6 * k as i64 + 1) / q(1 - 6 * k as i64);
            assert_eq!(e2.zeta_coeff(k), v);
        }
    }

    #[test]
    fn order_zero() {
        for d in 2..5 {
            let e = asymptotic_expansion(&FamilyConfig::gould_hopper(d), 3, 0).unwrap();
            assert_eq!(e.tail.len(), 1);
            assert!(e.coeff(0).is_one());
        }
    }

    #[test]
    fn propagation_matches() {
        for d in [2usize, 3] {
            let gh = FamilyConfig::gould_hopper(d);
            for s in -3..3 {
                let e = asymptotic_expansion(&gh, s, 5).unwrap();
                let lo = propagate_expansion(&e, Relation::Lowering).unwrap();
                assert_eq!(lo, asymptotic_expansion(&gh, s - 1, 5).unwrap());
                if s != -1 {
                    let up = propagate_expansion(&e, Relation::Recurrence).unwrap();
                    assert_eq!(
                        up,
                        asymptotic_expansion(&gh, s + 1, 4).unwrap(),
                        "d={d} s={s}"
                    );
                }
                assert!(expansion_check(&e).passed);
            }
        }
        let e = asymptotic_expansion(&FamilyConfig::gould_hopper(2), -1, 3).unwrap();
        assert_eq!(
            propagate_expansion(&e, Relation::Recurrence).unwrap_err(),
            Error::DivisionByZero(-1)
        );
    }
}
