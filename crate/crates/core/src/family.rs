//! Bispectral polynomial systems `P_n = e^{q(∂)} x^n`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::{Poly, XPolynomial};
use crate::rational::{falling, frac, q, Rational};
use crate::report::CheckReport;
use crate::weyl::{apply, DiffOperator};

/// `q(∂) = Σ_{j=1}^{d+1} a_j ∂^j` together with `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyConfig {
    d: usize,
    q_coeffs: Vec<Rational>,
}

impl FamilyConfig {
    /// Validates `a_1 .. a_{d+1}`, requiring `a_{d+1} ≠ 0`.
    pub fn new(d: usize, q_coeffs: Vec<Rational>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidConfig("d must be positive".into()));
        }
        if q_coeffs.len() != d + 1 {
            return Err(Error::InvalidConfig(format!(
                "expected {} coefficients a_1..a_{}, got {}",
                d + 1,
                d + 1,
                q_coeffs.len()
            )));
        }
        if q_coeffs[d].is_zero() {
            return Err(Error::InvalidConfig(
                "leading coefficient a_{d+1} vanishes".into(),
            ));
        }
        Ok(FamilyConfig { d, q_coeffs })
    }

    /// Gould-Hopper family, `q(∂) = -∂^{d+1}/(d+1)`.
    pub fn gould_hopper(d: usize) -> Self {
        let mut cs = vec![Rational::zero(); d + 1];
        cs[d] = frac(-1, d as i64 + 1);
        FamilyConfig::new(d.max(1), cs).expect("valid Gould-Hopper config")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn q_coeffs(&self) -> &[Rational] {
        &self.q_coeffs
    }

    pub fn is_gould_hopper(&self) -> bool {
        let d = self.d;
        self.q_coeffs[..d].iter().all(Zero::is_zero) && self.q_coeffs[d] == frac(-1, d as i64 + 1)
    }

    /// `q` as a polynomial in `∂`.
    pub fn q_poly(&self) -> Poly {
        let mut p = Poly::zero();
        for (i, a) in self.q_coeffs.iter().enumerate() {
            p.add_term(i as u32 + 1, a.clone());
        }
        p
    }

    pub fn q_prime(&self) -> Poly {
        self.q_poly().derivative()
    }
}

/// `P_n = Σ_j q(∂)^j x^n / j!`; the sum stops once `q(∂)^j x^n` vanishes.
pub fn generate_polynomial(cfg: &FamilyConfig, n: usize) -> XPolynomial {
    let qop = DiffOperator::from_d_poly(&cfg.q_poly());
    let mut term = Poly::monomial(n as u32, Rational::one());
    let mut total = term.clone();
    let mut j = 1i64;
    loop {
        term = apply(&qop, &term).scale(&frac(1, j));
        if term.is_zero() {
            return total;
        }
        total = &total + &term;
        j += 1;
    }
}

/// `L = q'(∂)∂ + x∂`, the operator with `L P_n = n P_n`.
pub fn bochner_operator(cfg: &FamilyConfig) -> DiffOperator {
    let qp = DiffOperator::from_d_poly(&cfg.q_prime().shift_degree(1));
    &qp + &DiffOperator::term(1, 1, Rational::one())
}

/// `γ_j(n)` in `x P_n = P_{n+1} + Σ_j γ_j(n) P_{n-j}`, keyed by offset `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceRow {
    pub n: usize,
    pub gamma: BTreeMap<usize, Rational>,
}

impl RecurrenceRow {
    pub fn gamma(&self, j: usize) -> Rational {
        self.gamma.get(&j).cloned().unwrap_or_else(Rational::zero)
    }
}

/// Cached `P_0 ..= P_{n_max}` for one configuration.
#[derive(Clone, Debug)]
pub struct PolyFamily {
    cfg: FamilyConfig,
    polys: Vec<XPolynomial>,
}

impl PolyFamily {
    pub fn new(cfg: &FamilyConfig, n_max: usize) -> Self {
        let polys = (0..=n_max)
            .into_par_iter()
            .map(|n| generate_polynomial(cfg, n))
            .collect();
        PolyFamily {
            cfg: cfg.clone(),
            polys,
        }
    }

    pub fn config(&self) -> &FamilyConfig {
        &self.cfg
    }

    pub fn n_max(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn get(&self, n: usize) -> &XPolynomial {
        &self.polys[n]
    }

    pub fn polys(&self) -> &[XPolynomial] {
        &self.polys
    }

    /// Coordinates of `p` in the basis `{P_k}` by leading-term elimination.
    ///
    /// Panics if `deg p` exceeds the cached range.
    pub fn expand(&self, p: &XPolynomial) -> BTreeMap<usize, Rational> {
        let mut rest = p.clone();
        let mut out = BTreeMap::new();
        while let Some((k, c)) = rest.leading().map(|(k, c)| (k as usize, c.clone())) {
            rest = &rest - &self.polys[k].scale(&c);
            out.insert(k, c);
        }
        out
    }

    /// Recurrence row for `n`; needs `P_{n+1}` cached.
    pub fn recurrence_row(&self, n: usize) -> RecurrenceRow {
        let xp = self.polys[n].shift_degree(1);
        let rest = &xp - &self.polys[n + 1];
        let gamma = self
            .expand(&rest)
            .into_iter()
            .map(|(k, c)| (n - k, c))
            .collect();
        RecurrenceRow { n, gamma }
    }
}

/// Recurrence coefficients computed by basis expansion of `x P_n - P_{n+1}`.
pub fn recurrence_coefficients(cfg: &FamilyConfig, n: usize) -> RecurrenceRow {
    PolyFamily::new(cfg, n + 1).recurrence_row(n)
}

/// Checks `L P_n = n P_n`, `∂P_n = n P_{n-1}` and the `d+2`-term recurrence
/// for every `n ≤ n_max`.
pub fn verify_bispectrality(cfg: &FamilyConfig, n_max: usize) -> CheckReport {
    let fam = PolyFamily::new(cfg, n_max + 1);
    let l = bochner_operator(cfg);
    let d = cfg.d();
    let parts: Vec<CheckReport> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let mut rep = CheckReport::new("bispectrality");
            let p = fam.get(n);
            let eig = &apply(&l, p) - &p.scale(&q(n as i64));
            rep.expect(
                eig.is_zero(),
                || format!("n={n}: L P_n - n P_n"),
                "nonzero residual",
                &eig.dense(),
            );
            let low = if n == 0 {
                p.derivative()
            } else {
                &p.derivative() - &fam.get(n - 1).scale(&q(n as i64))
            };
            rep.expect(
                low.is_zero(),
                || format!("n={n}: ∂P_n - n P_(n-1)"),
                "nonzero residual",
                &low.dense(),
            );
            let row = fam.recurrence_row(n);
            let mut rebuilt = fam.get(n + 1).clone();
            for (&j, g) in &row.gamma {
                rebuilt = &rebuilt + &fam.get(n - j).scale(g);
            }
            let res = &p.shift_degree(1) - &rebuilt;
            rep.expect(
                res.is_zero(),
                || format!("n={n}: recurrence residual"),
                "nonzero residual",
                &res.dense(),
            );
            let wide: Vec<Rational> = row
                .gamma
                .iter()
                .filter(|(&j, _)| j > d)
                .map(|(_, g)| g.clone())
                .collect();
            rep.expect(
                wide.is_empty(),
                || format!("n={n}: recurrence wider than d+2 terms"),
                "offset > d",
                &wide,
            );
            if n >= d {
                let gd = row.gamma(d);
                rep.expect(
                    !gd.is_zero(),
                    || format!("n={n}: γ_d(n) = 0"),
                    "degenerate recurrence",
                    &[gd],
                );
            }
            rep
        })
        .collect();
    let mut rep = CheckReport::new("bispectrality");
    parts.into_iter().for_each(|p| rep.absorb(p));
    rep
}

/// `n!/(n-d)!`, the only nonzero Gould-Hopper recurrence coefficient.
pub fn gould_hopper_gamma(n: usize, d: usize) -> Rational {
    Rational::from_integer(falling(n as u64, d as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_polynomials() {
        let gh2 = FamilyConfig::gould_hopper(2);
        assert_eq!(generate_polynomial(&gh2, 3), Poly::from_i64(&[-2, 0, 0, 1]));
        assert_eq!(
            generate_polynomial(&gh2, 6),
            Poly::from_i64(&[40, 0, 0, -40, 0, 0, 1])
        );
        let he = FamilyConfig::gould_hopper(1);
        assert_eq!(generate_polynomial(&he, 3), Poly::from_i64(&[0, -3, 0, 1]));
        assert_eq!(generate_polynomial(&he, 0), Poly::one());
    }

    #[test]
    fn bochner_examples() {
        let mut want = DiffOperator::term(1, 1, q(1));
        want.add_term(0, 3, q(-1));
        assert_eq!(bochner_operator(&FamilyConfig::gould_hopper(2)), want);
        let mut want = DiffOperator::term(1, 1, q(1));
        want.add_term(0, 2, q(-1));
        assert_eq!(bochner_operator(&FamilyConfig::gould_hopper(1)), want);
        let mut want = DiffOperator::term(1, 1, q(1));
        want.add_term(0, 4, q(-1));
        assert_eq!(bochner_operator(&FamilyConfig::gould_hopper(3)), want);
    }

    #[test]
    fn recurrence_examples() {
        let gh2 = FamilyConfig::gould_hopper(2);
        let r = recurrence_coefficients(&gh2, 2);
        assert_eq!(r.gamma, BTreeMap::from([(2, q(2))]));
        assert_eq!(
            recurrence_coefficients(&gh2, 3).gamma,
            BTreeMap::from([(2, q(6))])
        );
        let he = FamilyConfig::gould_hopper(1);
        assert_eq!(
            recurrence_coefficients(&he, 2).gamma,
            BTreeMap::from([(1, q(2))])
        );
        assert!(recurrence_coefficients(&gh2, 1).gamma.is_empty());
    }

    #[test]
    fn bispectrality_small() {
        for d in 1..=3 {
            assert!(verify_bispectrality(&FamilyConfig::gould_hopper(d), 0).passed);
        }
        assert!(verify_bispectrality(&FamilyConfig::gould_hopper(2), 40).passed);
        assert!(verify_bispectrality(&FamilyConfig::gould_hopper(3), 30).passed);
    }

    #[test]
    fn general_q_is_bispectral() {
        let cfg = FamilyConfig::new(2, vec![frac(1, 2), q(3), frac(-2, 7)]).unwrap();
        let rep = verify_bispectrality(&cfg, 15);
        assert!(rep.passed, "{:?}", rep.failures);
    }

    #[test]
    fn config_validation() {
        assert!(FamilyConfig::new(2, vec![q(1), q(0), q(0)]).is_err());
        assert!(FamilyConfig::new(2, vec![q(1)]).is_err());
        assert!(FamilyConfig::new(0, vec![q(1)]).is_err());
        assert!(FamilyConfig::gould_hopper(4).is_gould_hopper());
    }
}
