//! Quadratic bosonic operators in the times `t_k` and the Virasoro family
//! that annihilates the tau functions of the Gould-Hopper planes.
//!
//! Heisenberg modes: `J_k = ∂_{t_k}`, `J_{-k} = k t_k` for `k > 0`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::{frac, q, Rational};
use crate::report::CheckReport;
use crate::series::{weight, Monomial, TauSeries};

/// `Σ a t_k t_l + Σ b t_k ∂_l + Σ c ∂_k ∂_l + Σ e t_k + Σ f ∂_k + g`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BosonicOperator {
    /// `(k, l)` with `k ≤ l`.
    pub quadratic_creation: BTreeMap<(usize, usize), Rational>,
    /// `t_k ∂_{t_l}`.
    pub mixed: BTreeMap<(usize, usize), Rational>,
    /// `(k, l)` with `k ≤ l`.
    pub quadratic_annihilation: BTreeMap<(usize, usize), Rational>,
    pub linear_creation: BTreeMap<usize, Rational>,
    pub linear: BTreeMap<usize, Rational>,
    pub constant: Rational,
}

/// Normal-ordered monomial: sorted creation indices, sorted annihilation indices.
type Word = (Vec<usize>, Vec<usize>);

fn bump<K: Ord>(m: &mut BTreeMap<K, Rational>, k: K, c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = m.entry(k).or_insert_with(Rational::zero);
    *e += c;
}

fn ordered(k: usize, l: usize) -> (usize, usize) {
    (k.min(l), k.max(l))
}

impl BosonicOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: Rational) -> Self {
        BosonicOperator {
            constant: c,
            ..Self::default()
        }
    }

    /// `J_k`: `∂_{t_k}` for `k > 0`, `|k| t_{|k|}` for `k < 0`, zero at `k = 0`.
    pub fn current(k: i64) -> Self {
        let mut op = Self::zero();
        if k > 0 {
            op.linear.insert(k as usize, Rational::one());
        } else if k < 0 {
            op.linear_creation.insert((-k) as usize, q(-k));
        }
        op
    }

    pub fn add_creation(&mut self, k: usize, l: usize, c: Rational) {
        bump(&mut self.quadratic_creation, ordered(k, l), c);
    }

    pub fn add_mixed(&mut self, k: usize, l: usize, c: Rational) {
        bump(&mut self.mixed, (k, l), c);
    }

    pub fn add_annihilation(&mut self, k: usize, l: usize, c: Rational) {
        bump(&mut self.quadratic_annihilation, ordered(k, l), c);
    }

    pub fn add_linear(&mut self, k: usize, c: Rational) {
        bump(&mut self.linear, k, c);
    }

    pub fn add_linear_creation(&mut self, k: usize, c: Rational) {
        bump(&mut self.linear_creation, k, c);
    }

    pub fn is_zero(&self) -> bool {
        self.to_words().is_empty()
    }

    /// Largest time index referenced.
    pub fn max_index(&self) -> usize {
        self.to_words()
            .keys()
            .flat_map(|(a, b)| a.iter().chain(b))
            .copied()
            .max()
            .unwrap_or(0)
    }

    fn to_words(&self) -> BTreeMap<Word, Rational> {
        let mut w = BTreeMap::new();
        for ((k, l), c) in &self.quadratic_creation {
            bump(&mut w, (vec![*k, *l], vec![]), c.clone());
        }
        for ((k, l), c) in &self.mixed {
            bump(&mut w, (vec![*k], vec![*l]), c.clone());
        }
        for ((k, l), c) in &self.quadratic_annihilation {
            bump(&mut w, (vec![], vec![*k, *l]), c.clone());
        }
        for (k, c) in &self.linear_creation {
            bump(&mut w, (vec![*k], vec![]), c.clone());
        }
        for (k, c) in &self.linear {
            bump(&mut w, (vec![], vec![*k]), c.clone());
        }
        bump(&mut w, (vec![], vec![]), self.constant.clone());
        w.retain(|_, c| !c.is_zero());
        w
    }

    fn from_words(words: BTreeMap<Word, Rational>) -> Result<Self> {
        let mut op = Self::zero();
        for ((a, b), c) in words {
            if c.is_zero() {
                continue;
            }
            match (a.as_slice(), b.as_slice()) {
                ([k, l], []) => op.add_creation(*k, *l, c),
                ([k], [l]) => op.add_mixed(*k, *l, c),
                ([], [k, l]) => op.add_annihilation(*k, *l, c),
                ([k], []) => op.add_linear_creation(*k, c),
                ([], [k]) => op.add_linear(*k, c),
                ([], []) => op.constant += c,
                _ => {
                    return Err(Error::InvalidConfig(format!(
                        "degree {} term",
                        a.len() + b.len()
                    )))
                }
            }
        }
        op.prune();
        Ok(op)
    }

    fn prune(&mut self) {
        self.quadratic_creation.retain(|_, c| !c.is_zero());
        self.mixed.retain(|_, c| !c.is_zero());
        self.quadratic_annihilation.retain(|_, c| !c.is_zero());
        self.linear_creation.retain(|_, c| !c.is_zero());
        self.linear.retain(|_, c| !c.is_zero());
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let words = self
            .to_words()
            .into_iter()
            .map(|(w, v)| (w, v * c))
            .collect();
        Self::from_words(words).expect("scaling keeps degree")
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut words = self.to_words();
        for (w, c) in other.to_words() {
            bump(&mut words, w, c);
        }
        Self::from_words(words).expect("sum keeps degree")
    }

    /// Drops every term that touches an index above `k`.
    pub fn truncate(&self, k: usize) -> Self {
        let words = self
            .to_words()
            .into_iter()
            .filter(|((a, b), _)| a.iter().chain(b).all(|&i| i <= k))
            .collect();
        Self::from_words(words).expect("truncation keeps degree")
    }

    /// Exact application; terms above the series cap are dropped.
    pub fn apply(&self, f: &TauSeries) -> TauSeries {
        let nv = f.nvars();
        let cap = f.cap();
        let fits = |k: usize| k <= nv;
        let mut out = f.scale(&self.constant);
        let mul = |g: &TauSeries, k: usize| {
            if fits(k) {
                g.mul_var(k)
            } else {
                TauSeries::zero(nv, cap)
            }
        };
        for (k, c) in &self.linear {
            out = &out + &f.derivative(*k).scale(c);
        }
        for (k, c) in &self.linear_creation {
            out = &out + &mul(f, *k).scale(c);
        }
        for ((k, l), c) in &self.quadratic_annihilation {
            out = &out + &f.derivative(*l).derivative(*k).scale(c);
        }
        for ((k, l), c) in &self.mixed {
            out = &out + &mul(&f.derivative(*l), *k).scale(c);
        }
        for ((k, l), c) in &self.quadratic_creation {
            out = &out + &mul(&mul(f, *l), *k).scale(c);
        }
        out
    }
}

/// `(∏ t^α ∂^β)(∏ t^γ ∂^δ)` in normal order.
fn word_product(x: &Word, y: &Word, c: &Rational, out: &mut BTreeMap<Word, Rational>) {
    let (alpha, beta) = x;
    let (gamma, delta) = y;
    // Sum over partial matchings of β against γ with equal indices.
    fn rec(
        i: usize,
        beta: &[usize],
        gamma: &[usize],
        used: &mut Vec<bool>,
        kept_beta: &mut Vec<usize>,
        acc: &mut Vec<(Vec<usize>, Vec<usize>)>,
    ) {
        if i == beta.len() {
            let kept_gamma = gamma
                .iter()
                .zip(used.iter())
                .filter(|(_, u)| !**u)
                .map(|(g, _)| *g)
                .collect();
            acc.push((kept_gamma, kept_beta.clone()));
            return;
        }
        kept_beta.push(beta[i]);
        rec(i + 1, beta, gamma, used, kept_beta, acc);
        kept_beta.pop();
        for j in 0..gamma.len() {
            if !used[j] && gamma[j] == beta[i] {
                used[j] = true;
                rec(i + 1, beta, gamma, used, kept_beta, acc);
                used[j] = false;
            }
        }
    }
    let mut acc = Vec::new();
    rec(
        0,
        beta,
        gamma,
        &mut vec![false; gamma.len()],
        &mut Vec::new(),
        &mut acc,
    );
    for (g, b) in acc {
        let mut a: Vec<usize> = alpha.iter().chain(&g).copied().collect();
        let mut d: Vec<usize> = b.iter().chain(delta).copied().collect();
        a.sort();
        d.sort();
        bump(out, (a, d), c.clone());
    }
}

pub fn commutator(a: &BosonicOperator, b: &BosonicOperator) -> BosonicOperator {
    let (wa, wb) = (a.to_words(), b.to_words());
    let mut out = BTreeMap::new();
    for (x, cx) in &wa {
        for (y, cy) in &wb {
            word_product(x, y, &(cx * cy), &mut out);
            word_product(y, x, &-(cx * cy), &mut out);
        }
    }
    out.retain(|_, c: &mut Rational| !c.is_zero());
    BosonicOperator::from_words(out).expect("commutator of quadratic operators is quadratic")
}

/// `½ Σ_{a+b=n} :J_a J_b:` over nonzero `a, b`, with indices up to `cap`.
pub fn sugawara(n: i64, cap: usize) -> BosonicOperator {
    let mut op = BosonicOperator::zero();
    let k = cap as i64;
    for a in -k..=k {
        let b = n - a;
        if a == 0 || b == 0 || b.abs() > k {
            continue;
        }
        let half = frac(1, 2);
        match (a > 0, b > 0) {
            (true, true) => op.add_annihilation(a as usize, b as usize, half),
            (false, false) => op.add_creation((-a) as usize, (-b) as usize, half * q(a * b)),
            // :J_a J_b: puts the creation part first; each ordered pair appears twice.
            (false, true) => op.add_mixed((-a) as usize, b as usize, half * q(-a)),
            (true, false) => op.add_mixed((-b) as usize, a as usize, half * q(-b)),
        }
    }
    op
}

/// Choices that pin down the family; see [`VirasoroFamily::convention_log`].
#[derive(Clone, Debug, PartialEq)]
pub struct Conventions {
    /// `t_{d+1} → t_{d+1} − shift`.
    pub dilaton_shift: Rational,
    /// Coefficient `c` of the charge term `c·q·J_{dn}`, `q = m + 1`.
    pub charge_coefficient: Rational,
    /// Added to the charge coefficient on positive modes.
    pub positive_charge_extra: Rational,
    /// Coefficient of `∂_{t_d}²` added to `L_2`.
    pub l2_extra: Rational,
    /// Constant in `L_0` independent of the charge.
    pub vacuum_energy: Rational,
    /// Charge-dependent part of the `L_0` constant, as `(a, b)` in `a q² + b q`.
    pub charge_energy: (Rational, Rational),
}

impl Conventions {
    pub fn standard(d: usize) -> Self {
        let d = d as i64;
        Conventions {
            dilaton_shift: frac(d, d + 1),
            charge_coefficient: frac(1, d),
            positive_charge_extra: Rational::one(),
            l2_extra: frac(1, 2),
            vacuum_energy: frac(d * d - 1, 24 * d),
            charge_energy: (frac(d + 1, 2 * d) + frac(1, 2), frac(-1, 2)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VirasoroFamily {
    pub d: usize,
    pub m_charge: i64,
    pub cap: usize,
    pub operators: BTreeMap<i64, BosonicOperator>,
    pub conventions: Conventions,
    pub convention_log: Vec<String>,
}

impl VirasoroFamily {
    pub fn mode(&self, n: i64) -> Option<&BosonicOperator> {
        self.operators.get(&n)
    }
}

/// `L_n = (1/d)·½ Σ_{a+b=dn} :J_a J_b:` over nonzero modes, plus
///
/// * `−(d+1)·shift/d · ∂_{t_{d(n+1)+1}}` from `t_{d+1} → t_{d+1} − shift`,
/// * a charge term `c_n (m+1) J_{dn}` for `n ≠ 0`,
/// * `l2_extra · ∂_{t_d}²` in `L_2`,
/// * the `L_0` constant `vacuum_energy + a(m+1)² + b(m+1)`.
pub fn mode_operator(
    d: usize,
    charge: i64,
    n: i64,
    cap: usize,
    conv: &Conventions,
) -> BosonicOperator {
    let dq = q(d as i64);
    let mut op = sugawara(d as i64 * n, cap).scale(&dq.recip());
    // (k t_k) ∂_{t_{k+dn}} at k = d+1 picks up −(d+1)·shift/d.
    let target = d as i64 * (n + 1) + 1;
    if target >= 1 && target as usize <= cap {
        op.add_linear(
            target as usize,
            -(q(d as i64 + 1) * &conv.dilaton_shift) / &dq,
        );
    }
    let qc = q(charge + 1);
    let dn = d as i64 * n;
    if n != 0 && dn.unsigned_abs() as usize <= cap {
        let c = if n > 0 {
            &conv.charge_coefficient + &conv.positive_charge_extra
        } else {
            conv.charge_coefficient.clone()
        };
        op = op.add(&BosonicOperator::current(dn).scale(&(c * &qc)));
    }
    if n == 2 && d <= cap {
        op.add_annihilation(d, d, conv.l2_extra.clone());
    }
    if n == 0 {
        let (a, b) = &conv.charge_energy;
        op.constant += &conv.vacuum_energy + a * &qc * &qc + b * &qc;
    }
    op
}

/// Modes `-1..=k_max`; modes above 2 come from `[L_n, L_1] = (n−1) L_{n+1}`.
pub fn build_virasoro(d: usize, m_charge: i64, cap: usize, k_max: i64) -> Result<VirasoroFamily> {
    build_virasoro_with(d, m_charge, cap, k_max, Conventions::standard(d))
}

pub fn build_virasoro_with(
    d: usize,
    m_charge: i64,
    cap: usize,
    k_max: i64,
    conventions: Conventions,
) -> Result<VirasoroFamily> {
    if d == 0 || cap < 3 * d {
        return Err(Error::CapTooSmall(format!(
            "variable cap {cap} < 3d = {}",
            3 * d
        )));
    }
    let mut operators = BTreeMap::new();
    for n in -1..=2 {
        operators.insert(n, mode_operator(d, m_charge, n, cap, &conventions));
    }
    for n in 2..k_max {
        let next = commutator(&operators[&n], &operators[&1])
            .scale(&q(n - 1).recip())
            .truncate(cap);
        operators.insert(n + 1, next);
    }
    let c = &conventions;
    let convention_log = vec![
        format!("L_n = (1/{d}) * (1/2) sum_(a+b={d}n) :J_a J_b:, J_k = d/dt_k, J_-k = k t_k"),
        format!("dilaton shift t_{} -> t_{} - {}", d + 1, d + 1, c.dilaton_shift),
        format!(
            "charge term {} * (m+1) * J_(dn) for n < 0, ({} + {}) * (m+1) * J_(dn) for n > 0",
            c.charge_coefficient, c.charge_coefficient, c.positive_charge_extra
        ),
        format!("L_2 carries an extra {} * (d/dt_{d})^2", c.l2_extra),
        format!(
            "L_0 constant {} + {}*(m+1)^2 + {}*(m+1)",
            c.vacuum_energy, c.charge_energy.0, c.charge_energy.1
        ),
        "L_-1 sum starts at j = d+1".to_string(),
        format!(
            "intersection-number normalization: t_k -> {d}^(k/{}) t_k, i.e. weight-w coefficients of log tau times {d}^(w/{})",
            d + 1,
            d + 1
        ),
    ];
    Ok(VirasoroFamily {
        d,
        m_charge,
        cap,
        operators,
        conventions,
        convention_log,
    })
}

/// All monomials in `t_1..t_n` of weight at most `cap`.
pub fn monomials(nvars: usize, cap: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        let w = i as u32 + 1;
        for e in 0..=left / w {
            cur[i] = e;
            rec(i + 1, left - e * w, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, cap, &mut vec![0; nvars], &mut out);
    out.sort_by_key(|m| (weight(m), m.clone()));
    out
}

/// `[L_1, L_{-1}] = 2L_0 + c`, `[L_2, L_{-1}] = 3L_1`, `[L_0, L_0] = 0` and
/// `[L_a, L_b] = (a−b) L_{a+b}` for generated modes, applied to every
/// monomial of weight ≤ `cap`. Constants are measured and noted.
pub fn check_commutation(fam: &VirasoroFamily, k_max: i64, cap: u32) -> CheckReport {
    let mut rep = CheckReport::new(format!("virasoro commutators d={}", fam.d));
    let room = cap + 4 * fam.d as u32 * (k_max.max(2) as u32 + 1);
    let nv = room as usize;
    let basis = monomials(cap as usize, cap);
    let mode = |n: i64| fam.operators.get(&n).cloned();
    let mut pairs: Vec<(i64, i64)> = vec![(1, -1), (2, -1), (0, 0)];
    for a in -1..=k_max {
        for b in -1..a {
            if a + b <= k_max && !pairs.contains(&(a, b)) {
                pairs.push((a, b));
            }
        }
    }
    for (a, b) in pairs {
        let (Some(la), Some(lb)) = (mode(a), mode(b)) else {
            continue;
        };
        let Some(target) = mode(a + b) else { continue };
        let lhs_op = commutator(&la, &lb);
        let rhs = target.scale(&q(a - b));
        let central = lhs_op.constant.clone() - &rhs.constant;
        if !central.is_zero() {
            rep.note(format!("[L_{a},L_{b}] central term {central}"));
        }
        let results: Vec<(String, Vec<Rational>)> = basis
            .par_iter()
            .filter_map(|m| {
                let mut f = TauSeries::zero(nv, room);
                let mut full = m.clone();
                full.resize(nv, 0);
                f.add_term(full, Rational::one());
                let lhs = &la.apply(&lb.apply(&f)) - &lb.apply(&la.apply(&f));
                let want = &rhs.apply(&f) + &f.scale(&central);
                let diff = &lhs - &want;
                if diff.is_zero() {
                    None
                } else {
                    Some((
                        format!("[L_{a},L_{b}] on {m:?}"),
                        diff.terms().values().cloned().collect(),
                    ))
                }
            })
            .collect();
        let failed = results.len();
        for (case, vals) in results {
            rep.fail(case, "relation fails", &vals);
        }
        for _ in failed..basis.len() {
            rep.case_ok();
        }
    }
    rep
}

/// `L_{-1}τ = 0`, `L_0τ = m(m+1)/2·τ`, `L_jτ = 0` for `1 ≤ j ≤ k_max`, up to
/// weight `cap − d·(j+1)`; residuals are reported coefficient by coefficient.
pub fn check_constraints(tau: &TauSeries, fam: &VirasoroFamily, k_max: i64) -> CheckReport {
    let mut rep = CheckReport::new(format!(
        "virasoro constraints d={} m={}",
        fam.d, fam.m_charge
    ));
    let d = fam.d as i64;
    let cap = tau.cap() as i64;
    let m = fam.m_charge;
    let eig = frac(m * (m + 1), 2);
    for n in -1..=k_max {
        let Some(op) = fam.operators.get(&n) else {
            rep.fail(format!("L_{n}"), "mode missing", &[]);
            continue;
        };
        // The dilaton term lowers weight by d(n+1)+1, the quadratic part by dn.
        let valid = cap - (d * (n + 1) + 1).max(d * n);
        let mut image = op.apply(tau);
        if n == 0 {
            image = &image - &tau.scale(&eig);
        }
        let bad: Vec<(Monomial, Rational)> = image
            .terms()
            .iter()
            .filter(|(mo, _)| weight(mo) as i64 <= valid)
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect();
        if bad.is_empty() {
            rep.case_ok();
        }
        for (mo, c) in bad {
            rep.fail(format!("L_{n} tau at {mo:?}"), "nonzero coefficient", &[c]);
        }
    }
    rep
}
