//! Weight functionals realized through exact moment sequences.
//!
//! `v_0` is pinned down by the Pearson equation `(q'(-∂) + x) v_0 = 0` and
//! `⟨v_0, 1⟩ = 1`. Pairing the adjoint equation against `x^k` gives a
//! triangular recursion for `μ_k = ⟨v_0, x^k⟩`. The dual functionals are
//! `v_j = (-1)^j ∂^j v_0 / j!`, i.e. `⟨v_j, p⟩ = ⟨v_0, ∂^j p⟩ / j!`.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::{FamilyConfig, PolyFamily};
use crate::poly::{Poly, XPolynomial};
use crate::rational::{factorial, Rational};
use crate::report::CheckReport;
use crate::weyl::{apply, formal_adjoint, DiffOperator};

/// `q'(-∂) + x`.
pub fn pearson_operator(cfg: &FamilyConfig) -> DiffOperator {
    let mut reflected = Poly::zero();
    for (j, c) in cfg.q_prime().terms() {
        let c = if j % 2 == 0 { c.clone() } else { -c.clone() };
        reflected.add_term(j, c);
    }
    &DiffOperator::from_d_poly(&reflected) + &DiffOperator::x()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence {
    pub d: usize,
    /// `μ_0 ..= μ_K`.
    pub moments: Vec<Rational>,
}

impl MomentSequence {
    pub fn len(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }

    /// `⟨v_0, p⟩`.
    pub fn pair(&self, p: &XPolynomial) -> Result<Rational> {
        if let Some(deg) = p.degree() {
            if deg as usize >= self.moments.len() {
                return Err(Error::InsufficientMoments {
                    needed: deg as usize,
                    available: self.moments.len(),
                });
            }
        }
        Ok(p.terms().fold(Rational::zero(), |acc, (k, c)| {
            acc + c * &self.moments[k as usize]
        }))
    }

    pub fn functional(&self, j: usize) -> LinearFunctional<'_> {
        LinearFunctional { j, base: self }
    }
}

/// Moments `μ_0 ..= μ_K` from the adjoint of the Pearson operator.
///
/// The adjoint sends `x^k` to `x^{k+1} + (lower)`, and `⟨v_0, ·⟩` must kill
/// the result, which determines `μ_{k+1}` from `μ_0 ..= μ_k`.
pub fn moment_sequence(cfg: &FamilyConfig, k_max: usize) -> MomentSequence {
    let adj = formal_adjoint(&pearson_operator(cfg));
    let mut mu = vec![Rational::one()];
    for k in 0..k_max {
        let image = apply(&adj, &Poly::monomial(k as u32, Rational::one()));
        let lead = image.coeff(k as u32 + 1);
        debug_assert!(lead.is_one());
        let lower = image
            .terms()
            .filter(|&(e, _)| e as usize <= k)
            .fold(Rational::zero(), |acc, (e, c)| acc + c * &mu[e as usize]);
        mu.push(-lower / lead);
    }
    MomentSequence {
        d: cfg.d(),
        moments: mu,
    }
}

/// The `j`-th dual functional over a moment table.
#[derive(Clone, Copy, Debug)]
pub struct LinearFunctional<'a> {
    pub j: usize,
    pub base: &'a MomentSequence,
}

impl LinearFunctional<'_> {
    pub fn pair(&self, p: &XPolynomial) -> Result<Rational> {
        let v = self.base.pair(&p.derivative_n(self.j as u32))?;
        Ok(v / Rational::from_integer(factorial(self.j as u64)))
    }
}

pub fn pair_functional(f: &LinearFunctional<'_>, p: &XPolynomial) -> Result<Rational> {
    f.pair(p)
}

/// `⟨v_j, P_n⟩ = δ_{jn}` for `0 ≤ j, n ≤ N`.
pub fn verify_duality(cfg: &FamilyConfig, n_max: usize) -> CheckReport {
    let fam = PolyFamily::new(cfg, n_max);
    let mu = moment_sequence(cfg, n_max);
    let mut rep = CheckReport::new("duality");
    for j in 0..=n_max {
        let f = mu.functional(j);
        for n in 0..=n_max {
            let v = f.pair(fam.get(n)).expect("moment table covers degree N");
            let want = if j == n {
                Rational::one()
            } else {
                Rational::zero()
            };
            rep.expect(
                v == want,
                || format!("⟨v_{j}, P_{n}⟩"),
                "expected δ_jn",
                &[v],
            );
        }
    }
    rep
}

/// Orthogonality conditions of the `d` functionals `v_0 .. v_{d-1}` against
/// products `P_n P_m`, `n, m ≤ N`.
pub fn verify_d_orthogonality(cfg: &FamilyConfig, n_max: usize) -> CheckReport {
    let d = cfg.d();
    let fam = PolyFamily::new(cfg, n_max);
    let mu = moment_sequence(cfg, 2 * n_max);
    let parts: Vec<CheckReport> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let mut rep = CheckReport::new("d-orthogonality");
            for m in 0..=n_max {
                let prod = fam.get(n) * fam.get(m);
                for j in 0..d {
                    let v = mu
                        .functional(j)
                        .pair(&prod)
                        .expect("moment table covers degree 2N");
                    let bound = n * d + j;
                    if m > bound {
                        rep.expect(
                            v.is_zero(),
                            || format!("L_{j}(P_{n} P_{m})"),
                            "expected 0",
                            &[v],
                        );
                    } else if m == bound {
                        rep.expect(
                            !v.is_zero(),
                            || format!("L_{j}(P_{n} P_{m})"),
                            "expected nonzero",
                            &[v],
                        );
                    }
                }
            }
            rep
        })
        .collect();
    let mut rep = CheckReport::new("d-orthogonality");
    parts.into_iter().for_each(|p| rep.absorb(p));
    rep
}

/// `⟨v_0, L P_n⟩ = 0` for every `n ≤ N`.
pub fn verify_adjoint_identity(cfg: &FamilyConfig, n_max: usize) -> CheckReport {
    let fam = PolyFamily::new(cfg, n_max);
    let mu = moment_sequence(cfg, n_max);
    let l = crate::family::bochner_operator(cfg);
    let mut rep = CheckReport::new("adjoint identity");
    for n in 0..=n_max {
        let v = mu
            .pair(&apply(&l, fam.get(n)))
            .expect("degree within table");
        rep.expect(
            v.is_zero(),
            || format!("⟨v_0, L P_{n}⟩"),
            "expected 0",
            &[v],
        );
    }
    rep
}

/// Band structure of `M[m][n] = ⟨x v_m, P_n⟩ = ⟨v_m, x P_n⟩`.
///
/// The dual recurrence `x v_m = v_{m-1} + Σ_{k=0}^{d} γ_k(m+k) v_{m+k}` forces
/// `M[m][m-1] = 1` and `M[m][n] = 0` outside `m-1 ≤ n ≤ m+d`.
pub fn weight_recurrence_band(cfg: &FamilyConfig, n_max: usize) -> CheckReport {
    let d = cfg.d();
    let fam = PolyFamily::new(cfg, n_max + 1);
    let mu = moment_sequence(cfg, n_max + 1);
    let mut rep = CheckReport::new("weight recurrence band");
    for m in 0..=n_max {
        let f = mu.functional(m);
        for n in 0..=n_max {
            let v = f
                .pair(&fam.get(n).shift_degree(1))
                .expect("degree within table");
            if n + 1 == m {
                rep.expect(v.is_one(), || format!("M[{m}][{n}]"), "expected 1", &[v]);
            } else if n < m || n > m + d {
                rep.expect(v.is_zero(), || format!("M[{m}][{n}]"), "outside band", &[v]);
            } else {
                let want = fam.recurrence_row(n).gamma(n - m);
                rep.expect(
                    v == want,
                    || format!("M[{m}][{n}]"),
                    "expected γ_(n-m)(n)",
                    &[v, want],
                );
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::generate_polynomial;
    use crate::rational::{binomial, q};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn pearson_examples() {
        let mut airy = DiffOperator::x();
        airy.add_term(0, 2, q(-1));
        assert_eq!(pearson_operator(&FamilyConfig::gould_hopper(2)), airy);
        let mut d3 = DiffOperator::x();
        d3.add_term(0, 3, q(1));
        assert_eq!(pearson_operator(&FamilyConfig::gould_hopper(3)), d3);
        let mut gauss = DiffOperator::x();
        gauss.add_term(0, 1, q(1));
        assert_eq!(pearson_operator(&FamilyConfig::gould_hopper(1)), gauss);
    }

    #[test]
    fn moment_examples() {
        assert_eq!(
            moment_sequence(&FamilyConfig::gould_hopper(2), 6).moments,
            ints(&[1, 0, 0, 2, 0, 0, 40])
        );
        assert_eq!(
            moment_sequence(&FamilyConfig::gould_hopper(1), 6).moments,
            ints(&[1, 0, 1, 0, 3, 0, 15])
        );
        for d in 1..4 {
            assert_eq!(
                moment_sequence(&FamilyConfig::gould_hopper(d), 0).moments,
                ints(&[1])
            );
        }
    }

    #[test]
    fn gould_hopper_moment_recursion() {
        for d in 1..=4usize {
            let mu = moment_sequence(&FamilyConfig::gould_hopper(d), 30).moments;
            for k in 0..30usize {
                let want = if k >= d {
                    Rational::from_integer(crate::rational::falling(k as u64, d as u64))
                        * &mu[k - d]
                } else {
                    Rational::zero()
                };
                assert_eq!(mu[k + 1], want, "d={d} k={k}");
            }
        }
    }

    #[test]
    fn pairing_examples() {
        let cfg = FamilyConfig::gould_hopper(2);
        let mu = moment_sequence(&cfg, 8);
        assert_eq!(
            mu.functional(0)
                .pair(&generate_polynomial(&cfg, 6))
                .unwrap(),
            q(0)
        );
        assert_eq!(
            mu.functional(1)
                .pair(&generate_polynomial(&cfg, 1))
                .unwrap(),
            q(1)
        );
        assert_eq!(
            pair_functional(&mu.functional(0), &Poly::one()).unwrap(),
            q(1)
        );
        let p13 = &generate_polynomial(&cfg, 1) * &generate_polynomial(&cfg, 3);
        assert_eq!(mu.functional(0).pair(&p13).unwrap(), q(0));
        let p12 = &generate_polynomial(&cfg, 1) * &generate_polynomial(&cfg, 2);
        assert_eq!(mu.functional(0).pair(&p12).unwrap(), q(2));
        let err = mu.functional(0).pair(&Poly::monomial(9, q(1))).unwrap_err();
        assert_eq!(
            err,
            Error::InsufficientMoments {
                needed: 9,
                available: 9
            }
        );
    }

    #[test]
    fn dual_pairing_is_binomial_shift() {
        let cfg = FamilyConfig::gould_hopper(3);
        let fam = PolyFamily::new(&cfg, 12);
        let mu = moment_sequence(&cfg, 12);
        for n in 0..=12usize {
            for j in 0..=n {
                let lhs = mu.functional(j).pair(fam.get(n)).unwrap();
                let rhs = Rational::from_integer(binomial(n as u64, j as u64))
                    * mu.pair(fam.get(n - j)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn verifications_pass() {
        assert!(verify_duality(&FamilyConfig::gould_hopper(2), 20).passed);
        assert!(verify_duality(&FamilyConfig::gould_hopper(3), 15).passed);
        assert!(verify_duality(&FamilyConfig::gould_hopper(1), 10).passed);
        assert!(verify_d_orthogonality(&FamilyConfig::gould_hopper(2), 12).passed);
        assert!(verify_adjoint_identity(&FamilyConfig::gould_hopper(2), 20).passed);
        let general = FamilyConfig::new(2, vec![q(1), frac(1, 3), q(-2)]).unwrap();
        assert!(verify_duality(&general, 10).passed);
        assert!(verify_d_orthogonality(&general, 8).passed);
        let band = weight_recurrence_band(&general, 10);
        assert!(band.passed, "{:?}", band.failures);
    }

    use crate::rational::frac;
}
