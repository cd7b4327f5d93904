//! Pseudo-difference operators `Σ a_k(s) Λ^k` with polynomial coefficients,
//! the Lax operator `D = (s+1)Λ + Λ^{-d}`, its `d`-th root and the Toda flows.
//!
//! `Λ^k ∘ f(s) = f(s+k) Λ^k`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::family::FamilyConfig;
use crate::poly::{IndexFunction, Poly};
use crate::rational::Rational;

/// Direction in which the support may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorType {
    /// Support in `(-∞, N]`; truncated from below.
    Lower,
    /// Support in `[M, ∞)`; truncated from above.
    Upper,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PseudoDiffOperator {
    pub type_tag: OperatorType,
    pub terms: BTreeMap<i64, IndexFunction>,
    /// Last degree known exactly on the open side; `None` when the operator
    /// is a finite sum known in full.
    pub truncation: Option<i64>,
}

impl PseudoDiffOperator {
    pub fn zero(type_tag: OperatorType) -> Self {
        PseudoDiffOperator {
            type_tag,
            terms: BTreeMap::new(),
            truncation: None,
        }
    }

    pub fn identity() -> Self {
        Self::shift(0)
    }

    /// `Λ^k`.
    pub fn shift(k: i64) -> Self {
        Self::term(k, Poly::one())
    }

    /// `f(s) Λ^k`.
    pub fn term(k: i64, f: IndexFunction) -> Self {
        let mut p = Self::zero(OperatorType::Upper);
        p.add_term(k, f);
        p
    }

    pub fn add_term(&mut self, k: i64, f: IndexFunction) {
        let e = self.terms.entry(k).or_default();
        *e = &*e + &f;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn coeff(&self, k: i64) -> IndexFunction {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn is_exact(&self) -> bool {
        self.truncation.is_none()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Whether the coefficient at degree `k` is known exactly.
    pub fn is_reliable(&self, k: i64) -> bool {
        match (self.truncation, self.type_tag) {
            (None, _) => true,
            (Some(h), OperatorType::Upper) => k <= h,
            (Some(l), OperatorType::Lower) => k >= l,
        }
    }

    pub fn with_type(mut self, t: OperatorType) -> Self {
        self.type_tag = t;
        self
    }

    /// Declares everything past `bound` unknown and drops it.
    pub fn truncated(mut self, bound: i64) -> Self {
        let bound = match (self.truncation, self.type_tag) {
            (Some(h), OperatorType::Upper) => h.min(bound),
            (Some(l), OperatorType::Lower) => l.max(bound),
            (None, _) => bound,
        };
        match self.type_tag {
            OperatorType::Upper => self.terms.retain(|k, _| *k <= bound),
            OperatorType::Lower => self.terms.retain(|k, _| *k >= bound),
        }
        self.truncation = Some(bound);
        self
    }

    /// Errors with the offending degrees if any nonzero term lies outside
    /// `[lo, hi]`.
    pub fn fit_band(&self, lo: i64, hi: i64) -> Result<Self> {
        let lost: Vec<i64> = self
            .terms
            .keys()
            .copied()
            .filter(|k| *k < lo || *k > hi)
            .collect();
        if lost.is_empty() {
            Ok(self.clone())
        } else {
            Err(Error::BandOverflow(lost))
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.scale(c);
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    /// Degrees where `self` and `other` are both reliable and differ.
    pub fn disagreements(&self, other: &Self) -> Vec<i64> {
        let keys: std::collections::BTreeSet<i64> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .copied()
            .collect();
        keys.into_iter()
            .filter(|&k| {
                self.is_reliable(k) && other.is_reliable(k) && self.coeff(k) != other.coeff(k)
            })
            .collect()
    }
}

fn combine_truncation(
    p: &PseudoDiffOperator,
    q: &PseudoDiffOperator,
    t: OperatorType,
) -> Option<i64> {
    let lo = |x: &PseudoDiffOperator| x.min_degree().unwrap_or(0);
    let hi = |x: &PseudoDiffOperator| x.max_degree().unwrap_or(0);
    match t {
        OperatorType::Upper => {
            let a = p.truncation.map(|h| h + lo(q));
            let b = q.truncation.map(|h| h + lo(p));
            match (a, b) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            }
        }
        OperatorType::Lower => {
            let a = p.truncation.map(|l| l + hi(q));
            let b = q.truncation.map(|l| l + hi(p));
            match (a, b) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, b) => a.or(b),
            }
        }
    }
}

/// `P ∘ Q`, keeping only the degrees that the truncations of `P` and `Q`
/// determine exactly.
pub fn pdo_compose(p: &PseudoDiffOperator, q: &PseudoDiffOperator) -> Result<PseudoDiffOperator> {
    let t = match (p.is_exact(), q.is_exact()) {
        (true, true) => p.type_tag,
        (false, true) => p.type_tag,
        (true, false) => q.type_tag,
        (false, false) if p.type_tag == q.type_tag => p.type_tag,
        (false, false) => {
            let mut lost: Vec<i64> = p.terms.keys().chain(q.terms.keys()).copied().collect();
            lost.sort();
            lost.dedup();
            return Err(Error::BandOverflow(lost));
        }
    };
    let truncation = combine_truncation(p, q, t);
    let mut out = PseudoDiffOperator {
        type_tag: t,
        terms: BTreeMap::new(),
        truncation,
    };
    for (&a, fa) in &p.terms {
        for (&b, fb) in &q.terms {
            let k = a + b;
            if !out.is_reliable(k) {
                continue;
            }
            out.add_term(k, fa * &fb.translate(a));
        }
    }
    Ok(out)
}

pub fn pdo_add(p: &PseudoDiffOperator, q: &PseudoDiffOperator) -> PseudoDiffOperator {
    let t = if p.is_exact() { q.type_tag } else { p.type_tag };
    let truncation = match (p.truncation, q.truncation) {
        (Some(a), Some(b)) => Some(if t == OperatorType::Upper {
            a.min(b)
        } else {
            a.max(b)
        }),
        (a, b) => a.or(b),
    };
    let mut out = PseudoDiffOperator {
        type_tag: t,
        terms: p.terms.clone(),
        truncation,
    };
    for (&k, f) in &q.terms {
        out.add_term(k, f.clone());
    }
    if let Some(b) = truncation {
        out = out.truncated(b);
    }
    out
}

pub fn pdo_sub(p: &PseudoDiffOperator, q: &PseudoDiffOperator) -> PseudoDiffOperator {
    pdo_add(p, &q.scale(&-Rational::one()))
}

pub fn commutator(p: &PseudoDiffOperator, q: &PseudoDiffOperator) -> Result<PseudoDiffOperator> {
    Ok(pdo_sub(&pdo_compose(p, q)?, &pdo_compose(q, p)?))
}

/// Degrees `≥ 0`. Exact when `P` is.
pub fn project_plus(p: &PseudoDiffOperator) -> PseudoDiffOperator {
    let mut out = p.clone();
    out.terms.retain(|k, _| *k >= 0);
    if p.type_tag == OperatorType::Lower {
        out.truncation = None;
    }
    out
}

/// Degrees `< 0`.
pub fn project_minus(p: &PseudoDiffOperator) -> PseudoDiffOperator {
    let mut out = p.clone();
    out.terms.retain(|k, _| *k < 0);
    if p.type_tag == OperatorType::Upper {
        out.truncation = None;
    }
    out
}

/// `D = (s+1)Λ + Λ^{-d}`.
pub fn lax_operator(cfg: &FamilyConfig) -> PseudoDiffOperator {
    let d = cfg.d() as i64;
    let mut p = PseudoDiffOperator::term(1, Poly::from_i64(&[1, 1]));
    p.add_term(-d, Poly::one());
    p
}

/// Solves `T(r) = f` for a linear map on polynomials that sends `s^k` to
/// `c_k s^{k+e}` plus lower terms (`e ∈ {0, -1}`), with `r` free of the
/// degrees `T` annihilates.
fn solve_triangular(f: &Poly, e: i64, t: impl Fn(&Poly) -> Poly) -> Result<Poly> {
    let mut r = Poly::zero();
    let mut g = f.clone();
    let mut guard = 0;
    while let Some((n, a)) = g.leading().map(|(n, a)| (n, a.clone())) {
        let k = n as i64 - e;
        let image = t(&Poly::monomial(k as u32, Rational::one()));
        let (m, c) = image
            .leading()
            .ok_or_else(|| Error::NonInvertible(format!("s^{k}")))?;
        if m != n {
            return Err(Error::NonInvertible(format!("s^{k} image has degree {m}")));
        }
        let b = &a / c;
        r.add_term(k as u32, b.clone());
        g = &g - &image.scale(&b);
        guard += 1;
        if guard > 10_000 {
            return Err(Error::NonInvertible(
                "difference equation does not terminate".into(),
            ));
        }
    }
    Ok(r)
}

/// `δ(s) − δ(s−step) = f(s)` with `δ(0) = 0`.
fn solve_difference(f: &Poly, step: i64) -> Result<Poly> {
    solve_triangular(f, -1, |p| p - &p.translate(-step))
}

/// `Σ_{i<d} r(s−i) = f(s)`.
fn solve_window_sum(f: &Poly, d: i64) -> Result<Poly> {
    solve_triangular(f, 0, |p| {
        (0..d).fold(Poly::zero(), |acc, i| &acc + &p.translate(-i))
    })
}

fn check_shape(dop: &PseudoDiffOperator, d: i64) -> Result<()> {
    let ok = dop.is_exact()
        && dop.coeff(-d) == Poly::one()
        && dop.terms.keys().all(|&k| k >= -d && k <= 1);
    if ok {
        Ok(())
    } else {
        Err(Error::NonInvertible(format!(
            "expected an exact operator on [-{d}, 1] with unit Λ^-{d} coefficient"
        )))
    }
}

/// Wave operator `W = Σ_{j≥0} δ_j Λ^j`, `δ_0 = 1`, with `D W = W Λ^{-d}`,
/// through `Λ^order`.
pub fn dressing_operator(
    dop: &PseudoDiffOperator,
    d: usize,
    order: usize,
) -> Result<PseudoDiffOperator> {
    let d = d as i64;
    check_shape(dop, d)?;
    let mut delta: Vec<Poly> = vec![Poly::one()];
    for j in 1..=order as i64 {
        // degree j-d of D W - W Λ^{-d}:
        // Σ_{k} D_k(s) δ_{j-d-k}(s+k) - δ_j(s) = 0; the k = -d term is δ_j(s-d).
        let mut f = Poly::zero();
        for (&k, dk) in &dop.terms {
            if k == -d {
                continue;
            }
            let idx = j - d - k;
            if idx >= 0 && idx < j {
                f = &f + &(dk * &delta[idx as usize].translate(k));
            }
        }
        delta.push(solve_difference(&f, d)?);
    }
    let mut w = PseudoDiffOperator::zero(OperatorType::Upper);
    for (j, c) in delta.into_iter().enumerate() {
        w.add_term(j as i64, c);
    }
    Ok(w.truncated(order as i64))
}

/// Inverse of an upper-type operator with unit `Λ^0` coefficient and
/// nonnegative support.
pub fn invert_upper(w: &PseudoDiffOperator) -> Result<PseudoDiffOperator> {
    let order = w.truncation.unwrap_or_else(|| w.max_degree().unwrap_or(0));
    if w.coeff(0) != Poly::one() || w.min_degree() != Some(0) {
        return Err(Error::NonInvertible("leading coefficient is not 1".into()));
    }
    // W = 1 + N, W^{-1} = Σ (-N)^n
    let mut n = w.clone().truncated(order);
    n.terms.remove(&0);
    let neg_n = n.scale(&-Rational::one());
    let mut total = PseudoDiffOperator::identity().truncated(order);
    let mut power = total.clone();
    for _ in 0..order {
        power = pdo_compose(&power, &neg_n)?;
        if power.terms.is_empty() {
            break;
        }
        total = pdo_add(&total, &power);
    }
    Ok(total)
}

/// Inverse of a lower-type operator with unit `Λ^0` coefficient and
/// nonpositive support.
pub fn invert_lower(w: &PseudoDiffOperator) -> Result<PseudoDiffOperator> {
    let order = w.truncation.unwrap_or_else(|| w.min_degree().unwrap_or(0));
    if w.coeff(0) != Poly::one() || w.max_degree() != Some(0) {
        return Err(Error::NonInvertible("leading coefficient is not 1".into()));
    }
    let mut n = w.clone().with_type(OperatorType::Lower).truncated(order);
    n.terms.remove(&0);
    let neg_n = n.scale(&-Rational::one());
    let mut total = PseudoDiffOperator::identity()
        .with_type(OperatorType::Lower)
        .truncated(order);
    let mut power = total.clone();
    for _ in 0..-order {
        power = pdo_compose(&power, &neg_n)?;
        if power.terms.is_empty() {
            break;
        }
        total = pdo_add(&total, &power);
    }
    Ok(total)
}

/// `R = W Λ^{-1} W^{-1}` with `R^d = D`, reliable through `Λ^{order-1}`.
pub fn dth_root(dop: &PseudoDiffOperator, d: usize, order: usize) -> Result<PseudoDiffOperator> {
    let w = dressing_operator(dop, d, order)?;
    let winv = invert_upper(&w)?;
    pdo_compose(&pdo_compose(&w, &PseudoDiffOperator::shift(-1))?, &winv)
}

/// `R = Λ^{-1} + Σ_{i≥0} r_i Λ^i` solved degree by degree from `R^d = D`.
pub fn dth_root_direct(
    dop: &PseudoDiffOperator,
    d: usize,
    order: usize,
) -> Result<PseudoDiffOperator> {
    let di = d as i64;
    check_shape(dop, di)?;
    let mut root = PseudoDiffOperator::shift(-1)
        .with_type(OperatorType::Upper)
        .truncated(-1);
    for i in 0..order as i64 {
        // With r_i unknown (zero), the Λ^{i-d+1} coefficient of R^d misses
        // exactly Σ_{p<d} r_i(s-p).
        let trial = root.clone().truncated(i - 1);
        let mut open = trial.clone();
        open.truncation = Some(i);
        let power = power_of(&open, d)?;
        let k = i - di + 1;
        let missing = &dop.coeff(k) - &power.coeff(k);
        let ri = solve_window_sum(&missing, di)?;
        let mut next = trial;
        next.truncation = Some(i);
        next.add_term(i, ri);
        root = next;
    }
    Ok(root)
}

/// `P^k`, `k ≥ 0`.
pub fn power_of(p: &PseudoDiffOperator, k: usize) -> Result<PseudoDiffOperator> {
    let mut acc = PseudoDiffOperator::identity().with_type(p.type_tag);
    for _ in 0..k {
        acc = pdo_compose(&acc, p)?;
    }
    Ok(acc)
}

/// Both forms of `∂_{t_k} D`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowRhs {
    /// `[(D^{k/d})_+, D]`, reliable up to its truncation.
    pub plus_form: PseudoDiffOperator,
    /// `−[(D^{k/d})_-, D]`, exact.
    pub minus_form: PseudoDiffOperator,
    /// `−(D^{k/d})_- W`.
    pub wave_flow: PseudoDiffOperator,
}

/// `[(D^{k/d})_+, D]` computed directly and as `−[(D^{k/d})_-, D]`; errors when
/// they disagree where both are reliable.
pub fn flow_rhs(dop: &PseudoDiffOperator, k: usize, d: usize, order: usize) -> Result<FlowRhs> {
    let w = dressing_operator(dop, d, order)?;
    let root = pdo_compose(
        &pdo_compose(&w, &PseudoDiffOperator::shift(-1))?,
        &invert_upper(&w)?,
    )?;
    let pk = power_of(&root, k)?;
    let plus_form = commutator(&project_plus(&pk), dop)?;
    let minus_form = commutator(&project_minus(&pk), dop)?.scale(&-Rational::one());
    let bad = plus_form.disagreements(&minus_form);
    if !bad.is_empty() {
        return Err(Error::InsufficientDepth(format!(
            "flow forms disagree at degrees {bad:?}"
        )));
    }
    let wave_flow = pdo_compose(&project_minus(&pk), &w)?.scale(&-Rational::one());
    Ok(FlowRhs {
        plus_form,
        minus_form,
        wave_flow,
    })
}

/// `[(D^k)_+, D]` from the integer power.
pub fn integer_power_flow(dop: &PseudoDiffOperator, k: usize) -> Result<PseudoDiffOperator> {
    commutator(&project_plus(&power_of(dop, k)?), dop)
}

/// `W̄ = Σ_{j≥0} w̄_j Λ^{-j}` with `D W̄ = W̄ Λ`, for `D = Λ + Σ_{i≥1} a_i Λ^{-i}`.
/// Non-monic `D` would need a non-polynomial `w̄_0`.
pub fn dress_to_shift(dop: &PseudoDiffOperator, order: usize) -> Result<PseudoDiffOperator> {
    if dop.coeff(1) != Poly::one() || dop.terms.keys().any(|&k| k > 1 || k == 0) || !dop.is_exact()
    {
        return Err(Error::NonInvertible(
            "Λ-dressing needs D = Λ + lower terms".into(),
        ));
    }
    let mut wbar: Vec<Poly> = vec![Poly::one()];
    for j in 1..=order as i64 {
        // w̄_j(s+1) − w̄_j(s) = −Σ_{i+l = j−1, i ≥ 1} a_i(s) w̄_l(s−i)
        let mut f = Poly::zero();
        for (&k, a) in &dop.terms {
            let i = -k;
            if i >= 1 && i < j {
                let l = (j - 1 - i) as usize;
                f = &f - &(a * &wbar[l].translate(-i));
            }
        }
        // forward difference: δ(s+1) − δ(s) = f(s)  ⇔  δ(s) − δ(s−1) = f(s−1)
        wbar.push(solve_difference(&f.translate(-1), 1)?);
    }
    let mut out = PseudoDiffOperator::zero(OperatorType::Lower);
    for (j, c) in wbar.into_iter().enumerate() {
        out.add_term(-(j as i64), c);
    }
    Ok(out.truncated(-(order as i64)))
}

impl fmt::Display for PseudoDiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        let mut first = true;
        for (k, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{}]L^{k}", c.to_string_in("s"))?;
        }
        match (self.truncation, self.type_tag) {
            (Some(h), OperatorType::Upper) => write!(f, " + O(L^{})", h + 1),
            (Some(l), OperatorType::Lower) => write!(f, " + O(L^{})", l - 1),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn s_plus(c: i64) -> Poly {
        Poly::from_i64(&[c, 1])
    }

    #[test]
    fn shift_rule() {
        let p = pdo_compose(
            &PseudoDiffOperator::shift(1),
            &PseudoDiffOperator::term(-2, Poly::var()),
        )
        .unwrap();
        assert_eq!(p, PseudoDiffOperator::term(-1, s_plus(1)));
        let a = PseudoDiffOperator::term(1, s_plus(1));
        let b = pdo_compose(&a, &a).unwrap();
        assert_eq!(b, PseudoDiffOperator::term(2, &s_plus(1) * &s_plus(2)));
        assert_eq!(pdo_compose(&a, &PseudoDiffOperator::identity()).unwrap(), a);
    }

    #[test]
    fn projections() {
        let dop = lax_operator(&FamilyConfig::gould_hopper(2));
        assert_eq!(project_plus(&dop), PseudoDiffOperator::term(1, s_plus(1)));
        assert_eq!(project_minus(&dop), PseudoDiffOperator::shift(-2));
        assert_eq!(dop.terms.keys().copied().collect::<Vec<_>>(), vec![-2, 1]);
        assert_eq!(
            project_minus(&PseudoDiffOperator::identity()).terms.len(),
            0
        );
    }

    #[test]
    fn roots_agree() {
        for d in [1usize, 2, 3] {
            let dop = lax_operator(&FamilyConfig::gould_hopper(d));
            let r = dth_root(&dop, d, 12).unwrap();
            let direct = dth_root_direct(&dop, d, 12).unwrap();
            assert!(r.disagreements(&direct).is_empty(), "d={d}");
            assert_eq!(r.coeff(-1), Poly::one());
            let rd = power_of(&r, d).unwrap();
            assert!(rd.disagreements(&dop).is_empty());
            assert!(rd.truncation.unwrap() >= 12 - d as i64);
        }
        let triv = PseudoDiffOperator::shift(-2);
        let r = dth_root(&triv, 2, 6).unwrap();
        assert_eq!(r.terms, PseudoDiffOperator::shift(-1).terms);
    }

    #[test]
    fn flows() {
        let dop = lax_operator(&FamilyConfig::gould_hopper(2));
        let f = flow_rhs(&dop, 2, 2, 12).unwrap();
        assert_eq!(
            f.minus_form.terms,
            PseudoDiffOperator::term(-1, Poly::constant(q(2))).terms
        );
        for k in 1..=3 {
            flow_rhs(&dop, k, 2, 12).unwrap();
        }
        let triv = flow_rhs(&PseudoDiffOperator::shift(-2), 1, 2, 6).unwrap();
        assert!(triv.plus_form.terms.is_empty() && triv.minus_form.terms.is_empty());
    }

    #[test]
    fn integer_flows_and_monotonicity() {
        let dop = lax_operator(&FamilyConfig::gould_hopper(2));
        for k in 1..=2 {
            let f = flow_rhs(&dop, 2 * k, 2, 12).unwrap();
            let g = integer_power_flow(&dop, k).unwrap();
            assert!(f.plus_form.disagreements(&g).is_empty());
            assert_eq!(f.minus_form.terms, g.terms);
        }
        let short = dressing_operator(&dop, 2, 6).unwrap();
        let long = dressing_operator(&dop, 2, 10).unwrap();
        for k in 0..=6 {
            assert_eq!(short.coeff(k), long.coeff(k));
        }
    }

    #[test]
    fn shift_dressing() {
        let mut dop = PseudoDiffOperator::shift(1);
        dop.add_term(-2, s_plus(0));
        let wbar = dress_to_shift(&dop, 8).unwrap();
        let lhs = pdo_compose(&dop, &wbar).unwrap();
        let rhs = pdo_compose(&wbar, &PseudoDiffOperator::shift(1)).unwrap();
        assert!(lhs.disagreements(&rhs).is_empty());
        assert!(lhs.truncation.unwrap() <= -6);
        let non_monic = lax_operator(&FamilyConfig::gould_hopper(2));
        assert!(matches!(
            dress_to_shift(&non_monic, 4),
            Err(Error::NonInvertible(_))
        ));
    }
}
