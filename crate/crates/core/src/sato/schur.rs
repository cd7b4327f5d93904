//! Schur polynomials in the times `t_k`, normalized so that
//! `exp(Σ t_k z^k) = Σ h_k z^k` and `p_k = k t_k`.

use std::collections::HashMap;

use num_traits::Zero;

use super::partition::Partition;
use crate::rational::{q, Rational};
use crate::series::TauSeries;

/// `h_0, …, h_n` in `nvars` variables with weight cap `cap`.
pub fn complete_homogeneous(n: usize, nvars: usize, cap: u32) -> Vec<TauSeries> {
    let mut h = vec![TauSeries::one(nvars, cap)];
    for k in 1..=n {
        // k h_k = Σ_j j t_j h_{k-j}
        let mut acc = TauSeries::zero(nvars, cap);
        for j in 1..=k.min(nvars) {
            acc = &acc + &h[k - j].mul_var(j).scale(&q(j as i64));
        }
        h.push(acc.scale(&q(k as i64).recip()));
    }
    h
}

/// Jacobi-Trudi `det[h_{λ_i - i + j}]`.
pub fn schur(lambda: &Partition, h: &[TauSeries]) -> TauSeries {
    let l = lambda.len();
    let nvars = h[0].nvars();
    let cap = h[0].cap();
    if l == 0 {
        return TauSeries::one(nvars, cap);
    }
    let entry = |i: usize, j: usize| -> Option<&TauSeries> {
        let k = lambda.part(i) as i64 - i as i64 + j as i64;
        if k < 0 {
            None
        } else {
            h.get(k as usize)
        }
    };
    // Laplace expansion down the rows, memoized on the set of used columns.
    fn minor<'a>(
        row: usize,
        used: u32,
        l: usize,
        entry: &dyn Fn(usize, usize) -> Option<&'a TauSeries>,
        memo: &mut HashMap<u32, TauSeries>,
        zero: &TauSeries,
    ) -> TauSeries {
        if row == l {
            return TauSeries::one(zero.nvars(), zero.cap());
        }
        if let Some(v) = memo.get(&used) {
            return v.clone();
        }
        let mut acc = zero.clone();
        let mut sign_neg = false;
        for col in 0..l {
            if used & (1 << col) != 0 {
                continue;
            }
            if let Some(e) = entry(row, col) {
                if !e.is_zero() {
                    let sub = minor(row + 1, used | (1 << col), l, entry, memo, zero);
                    let term = e * &sub;
                    acc = if sign_neg { &acc - &term } else { &acc + &term };
                }
            }
            sign_neg = !sign_neg;
        }
        memo.insert(used, acc.clone());
        acc
    }
    let zero = TauSeries::zero(nvars, cap);
    minor(0, 0, l, &entry, &mut HashMap::new(), &zero)
}

/// `s_λ` evaluated at rational times.
pub fn schur_at(lambda: &Partition, t: &[Rational]) -> Rational {
    let cap = lambda.size();
    let h = complete_homogeneous(cap as usize, t.len().max(1), cap);
    let s = schur(lambda, &h);
    let mut total = Rational::zero();
    for (m, c) in s.terms() {
        let mut v = c.clone();
        for (i, e) in m.iter().enumerate() {
            for _ in 0..*e {
                v *= &t[i];
            }
        }
        total += v;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn small_schur() {
        let h = complete_homogeneous(4, 4, 4);
        let t1 = TauSeries::var(1, 4, 4);
        let t2 = TauSeries::var(2, 4, 4);
        assert_eq!(schur(&Partition::parse("1").unwrap(), &h), t1);
        // s_{11} = t1²/2 - t2
        let s11 = &(&t1 * &t1).scale(&frac(1, 2)) - &t2;
        assert_eq!(schur(&Partition::parse("1,1").unwrap(), &h), s11);
        assert_eq!(h[2], &(&t1 * &t1).scale(&frac(1, 2)) + &t2);
    }
}
