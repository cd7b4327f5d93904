//! Functions of the second kind `ν(s, x) = ∫_C z^{-s-1} exp(q(z) + x z) dz`.
//!
//! [`quadrature`] evaluates them numerically on a two-ray contour;
//! [`expansion`] produces exact large-`x` expansions in `y = x^{1/d}`;
//! [`polynomial_residue_check`] recovers `P_n` from the residue at `z = 0`.

pub mod expansion;
pub mod quadrature;

pub use expansion::{
    asymptotic_expansion, expansion_check, ode_residual, propagate_expansion, AsymptoticExpansion,
    Relation,
};
pub use quadrature::{eval_nu, residual_checks, ContourSpec, NuValue};

use num_traits::{One, Zero};

use crate::family::{generate_polynomial, FamilyConfig};
use crate::poly::{Poly, XPolynomial};
use crate::rational::{factorial, Rational};
use crate::report::CheckReport;

/// `n! · [z^n] exp(q(z) + x z)`, i.e. `n!` times the residue of
/// `z^{-n-1} exp(q(z) + xz)` at the origin.
pub fn residue_polynomial(cfg: &FamilyConfig, n: usize) -> XPolynomial {
    // [z^k] exp(q(z)) by the power-series exponential, k ≤ n.
    let qz = cfg.q_poly();
    let mut exp_q = vec![Rational::zero(); n + 1];
    exp_q[0] = Rational::one();
    let mut term = vec![Rational::zero(); n + 1];
    term[0] = Rational::one();
    for j in 1..=n {
        let mut next = vec![Rational::zero(); n + 1];
        for (a, ta) in term.iter().enumerate().filter(|(_, t)| !t.is_zero()) {
            for (b, c) in qz.terms() {
                let k = a + b as usize;
                if k <= n {
                    next[k] += ta * c;
                }
            }
        }
        let jq = Rational::from_integer(j.into());
        term = next.into_iter().map(|v| v / &jq).collect();
        if term.iter().all(Zero::is_zero) {
            break;
        }
        for (e, t) in exp_q.iter_mut().zip(&term) {
            *e += t;
        }
    }
    // [z^n] exp(q) · exp(xz) = Σ_k [z^k]exp(q) · x^{n-k}/(n-k)!
    let nf = Rational::from_integer(factorial(n as u64));
    let mut out = Poly::zero();
    for (k, c) in exp_q.iter().enumerate() {
        let m = n - k;
        out.add_term(
            m as u32,
            c * &nf / Rational::from_integer(factorial(m as u64)),
        );
    }
    out
}

/// Compares the residue representation with the generated `P_n`.
pub fn polynomial_residue_check(cfg: &FamilyConfig, n: usize) -> CheckReport {
    let mut rep = CheckReport::new("polynomial residue");
    let res = residue_polynomial(cfg, n);
    let diff = &res - &generate_polynomial(cfg, n);
    rep.expect(
        diff.is_zero(),
        || format!("n={n}"),
        "residue differs from P_n",
        &diff.dense(),
    );
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    #[test]
    fn residue_matches_family() {
        let gh2 = FamilyConfig::gould_hopper(2);
        assert_eq!(residue_polynomial(&gh2, 3), Poly::from_i64(&[-2, 0, 0, 1]));
        assert_eq!(residue_polynomial(&gh2, 0), Poly::one());
        assert!(polynomial_residue_check(&FamilyConfig::gould_hopper(3), 8).passed);
        let general = FamilyConfig::new(2, vec![q(2), frac(-1, 5), q(3)]).unwrap();
        for n in 0..12 {
            assert!(polynomial_residue_check(&general, n).passed);
        }
    }
}
