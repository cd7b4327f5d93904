//! Points of the Sato Grassmannian in the stripped variable `y` and their
//! tau functions.
//!
//! A plane of charge `m` is spanned by vectors with leading exponents
//! `e_0, e_0+1, e_0+2, …` where `e_0 = -m-1`; vector `k` is the stripped
//! expansion of `ν(m-k)`, i.e. `y^{-s-1}` times its tail.

pub mod partition;
pub mod schur;

use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::{One, Zero};
use rayon::prelude::*;

pub use partition::{partitions_of, partitions_up_to, Partition};
pub use schur::{complete_homogeneous, schur, schur_at};

use crate::error::{Error, Result};
use crate::family::FamilyConfig;
use crate::rational::Rational;
use crate::report::CheckReport;
use crate::second_kind::{asymptotic_expansion, AsymptoticExpansion};
use crate::series::TauSeries;

/// A truncated Laurent series `Σ c_e y^e`, `floor ≤ e ≤ leading_exponent`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalLaurentVector {
    pub leading_exponent: i64,
    pub coeffs: BTreeMap<i64, Rational>,
    /// Lowest exponent whose coefficient is known.
    pub floor: i64,
}

impl FormalLaurentVector {
    pub fn monomial(e: i64, floor: i64) -> Self {
        FormalLaurentVector {
            leading_exponent: e,
            coeffs: BTreeMap::from([(e, Rational::one())]),
            floor,
        }
    }

    pub fn new(coeffs: BTreeMap<i64, Rational>, floor: i64) -> Result<Self> {
        let mut coeffs = coeffs;
        coeffs.retain(|e, c| *e >= floor && !c.is_zero());
        let leading_exponent = *coeffs
            .keys()
            .next_back()
            .ok_or(Error::DegenerateBasis(floor))?;
        Ok(FormalLaurentVector {
            leading_exponent,
            coeffs,
            floor,
        })
    }

    /// `y^{-s-1}` times the tail of `e`.
    pub fn from_expansion(e: &AsymptoticExpansion) -> Self {
        let lead = -e.s - 1;
        FormalLaurentVector {
            leading_exponent: lead,
            coeffs: e.tail.iter().map(|(f, c)| (lead + f, c.clone())).collect(),
            floor: lead + e.floor,
        }
    }

    pub fn coeff(&self, e: i64) -> Rational {
        self.coeffs.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_known(&self, e: i64) -> bool {
        e >= self.floor
    }

    pub fn with_floor(mut self, floor: i64) -> Self {
        self.floor = self.floor.max(floor);
        let f = self.floor;
        self.coeffs.retain(|e, _| *e >= f);
        self
    }

    /// `y^k · v`.
    pub fn shift(&self, k: i64) -> Self {
        FormalLaurentVector {
            leading_exponent: self.leading_exponent + k,
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (e + k, c.clone()))
                .collect(),
            floor: self.floor + k,
        }
    }

    /// `self - c·other`, known down to the larger floor.
    pub fn sub_scaled(&self, c: &Rational, other: &Self) -> Self {
        let floor = self.floor.max(other.floor);
        let mut coeffs = self.coeffs.clone();
        for (e, v) in &other.coeffs {
            let slot = coeffs.entry(*e).or_insert_with(Rational::zero);
            *slot -= c * v;
        }
        coeffs.retain(|e, v| *e >= floor && !v.is_zero());
        FormalLaurentVector {
            leading_exponent: self.leading_exponent,
            coeffs,
            floor,
        }
    }

    fn top(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannPlane {
    pub m: i64,
    pub basis: Vec<FormalLaurentVector>,
    pub depth: usize,
    /// The vector that extends this plane to charge `m+1`, when known.
    pub next: Option<FormalLaurentVector>,
}

impl GrassmannPlane {
    pub fn vacuum_exponent(&self) -> i64 {
        -self.m - 1
    }

    /// Pure powers `y^{e_0}, y^{e_0+1}, …`.
    pub fn trivial(m: i64, depth: usize) -> Self {
        let e0 = -m - 1;
        let floor = e0 - depth as i64;
        GrassmannPlane {
            m,
            basis: (0..depth as i64)
                .map(|k| FormalLaurentVector::monomial(e0 + k, floor))
                .collect(),
            depth,
            next: Some(FormalLaurentVector::monomial(e0 - 1, floor)),
        }
    }

    /// Reduces `v` against the (normalized) basis. `None` when `v` reaches
    /// above the top basis vector.
    pub fn reduce(&self, v: &FormalLaurentVector) -> Option<FormalLaurentVector> {
        let e0 = self.vacuum_exponent();
        let n = self.basis.len() as i64;
        let mut v = v.clone();
        if v.top().is_some_and(|t| t >= e0 + n) {
            return None;
        }
        for k in (0..n).rev() {
            let c = v.coeff(e0 + k);
            if !c.is_zero() {
                v = v.sub_scaled(&c, &self.basis[k as usize]);
            }
        }
        Some(v)
    }

    fn check_vacuum_pattern(&self) -> Result<()> {
        let e0 = self.vacuum_exponent();
        for (k, v) in self.basis.iter().enumerate() {
            if v.leading_exponent != e0 + k as i64 || !v.coeff(v.leading_exponent).is_one() {
                return Err(Error::InvalidConfig(format!(
                    "basis vector {k} is not normalized at y^{}",
                    e0 + k as i64
                )));
            }
        }
        Ok(())
    }
}

/// Plane `W_m = span{ν(m), ν(m-1), …}` from exact stripped expansions.
/// Vectors are kept down to `y^{e_0 - depth}`.
pub fn plane_from_family(cfg: &FamilyConfig, m: i64, depth: usize) -> Result<GrassmannPlane> {
    if depth == 0 {
        return Err(Error::InsufficientDepth("depth must be positive".into()));
    }
    let e0 = -m - 1;
    let floor = e0 - depth as i64;
    let dp1 = cfg.d() + 1;
    let vector = |s: i64| -> Result<FormalLaurentVector> {
        let lead = -s - 1;
        let reach = (lead - floor) as usize;
        let order = reach.div_ceil(dp1);
        Ok(
            FormalLaurentVector::from_expansion(&asymptotic_expansion(cfg, s, order)?)
                .with_floor(floor),
        )
    };
    let basis = (0..depth as i64)
        .into_par_iter()
        .map(|k| vector(m - k))
        .collect::<Result<Vec<_>>>()?;
    let next = Some(vector(m + 1)?);
    normalize_plane(GrassmannPlane {
        m,
        basis,
        depth,
        next,
    })
}

/// Echelon form: unit leading coefficients and zeros at every other basis
/// leading exponent.
pub fn normalize_plane(p: GrassmannPlane) -> Result<GrassmannPlane> {
    let mut basis = p.basis;
    for v in basis.iter_mut() {
        let top = v.top().ok_or(Error::DegenerateBasis(v.leading_exponent))?;
        let c = v.coeff(top).recip();
        v.leading_exponent = top;
        for x in v.coeffs.values_mut() {
            *x *= &c;
        }
    }
    basis.sort_by_key(|v| v.leading_exponent);
    if let Some(w) = basis
        .windows(2)
        .find(|w| w[0].leading_exponent == w[1].leading_exponent)
    {
        return Err(Error::DegenerateBasis(w[0].leading_exponent));
    }
    for k in 0..basis.len() {
        for j in (0..k).rev() {
            let c = basis[k].coeff(basis[j].leading_exponent);
            if !c.is_zero() {
                basis[k] = basis[k].sub_scaled(&c, &basis[j]);
            }
        }
    }
    let next = match p.next {
        Some(v) => {
            let lead = v.leading_exponent;
            let mut v = v;
            for b in basis.iter().rev() {
                let c = v.coeff(b.leading_exponent);
                if !c.is_zero() {
                    v = v.sub_scaled(&c, b);
                }
            }
            v.leading_exponent = lead;
            Some(v)
        }
        None => None,
    };
    Ok(GrassmannPlane {
        m: p.m,
        basis,
        depth: p.depth,
        next,
    })
}

/// Exponents `s_k = e_0 + k - λ_{k+1}` selected by `λ`.
fn row_set(e0: i64, lambda: &Partition) -> Vec<i64> {
    (0..lambda.len())
        .map(|k| e0 + k as i64 - lambda.part(k) as i64)
        .collect()
}

fn det(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let piv = a[c][c].clone();
        d *= &piv;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &piv;
            for k in c..n {
                let v = &f * &a[c][k];
                a[r][k] -= v;
            }
        }
    }
    d
}

/// Minor on rows `s_0 < s_1 < …` of the first `ℓ(λ)` basis vectors.
pub fn plucker_coordinate(p: &GrassmannPlane, lambda: &Partition) -> Result<Rational> {
    p.check_vacuum_pattern()?;
    let l = lambda.len();
    if l > p.basis.len() {
        return Err(Error::InsufficientDepth(format!(
            "{lambda} needs {l} basis vectors"
        )));
    }
    let rows = row_set(p.vacuum_exponent(), lambda);
    for (j, v) in p.basis.iter().take(l).enumerate() {
        if let Some(r) = rows.iter().find(|&&r| !v.is_known(r)) {
            return Err(Error::InsufficientDepth(format!(
                "vector {j} unknown at y^{r}"
            )));
        }
    }
    let a = rows
        .iter()
        .map(|&r| p.basis.iter().take(l).map(|v| v.coeff(r)).collect())
        .collect();
    Ok(det(a))
}

/// `Σ_{|λ| ≤ D} π_λ s_λ(t)` in `t_1..t_D`.
pub fn tau_series(p: &GrassmannPlane, cap: u32) -> Result<TauSeries> {
    let n = cap as usize;
    let h = complete_homogeneous(n, n.max(1), cap);
    let terms = partitions_up_to(cap)
        .into_par_iter()
        .map(|l| {
            let pi = plucker_coordinate(p, &l)?;
            Ok(if pi.is_zero() {
                TauSeries::zero(n.max(1), cap)
            } else {
                schur(&l, &h).scale(&pi)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(terms
        .iter()
        .fold(TauSeries::zero(n.max(1), cap), |a, b| &a + b))
}

/// `det P_+(e^{ξ(t,y)} W)` on the first `N` basis vectors, by elimination over
/// truncated series.
pub fn tau_determinant(p: &GrassmannPlane, cap: u32) -> Result<TauSeries> {
    p.check_vacuum_pattern()?;
    let n = cap as usize;
    let nv = n.max(1);
    let h = complete_homogeneous(n, nv, cap);
    let e0 = p.vacuum_exponent();
    let size = p.basis.len();
    let mut m: Vec<Vec<TauSeries>> = (0..size)
        .map(|i| {
            p.basis
                .iter()
                .map(|w| {
                    let mut acc = TauSeries::zero(nv, cap);
                    for (j, hj) in h.iter().enumerate() {
                        let e = e0 + i as i64 - j as i64;
                        if !w.is_known(e) {
                            break;
                        }
                        let c = w.coeff(e);
                        if !c.is_zero() {
                            acc = &acc + &hj.scale(&c);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let mut d = TauSeries::one(nv, cap);
    for c in 0..size {
        let inv = m[c][c].inverse()?;
        d = &d * &m[c][c];
        for r in c + 1..size {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] * &inv;
            for k in c..size {
                let v = &f * &m[c][k];
                m[r][k] = &m[r][k] - &v;
            }
        }
    }
    Ok(d)
}

fn sort_sign(v: &mut [i64]) -> Option<bool> {
    let mut neg = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                neg = !neg;
            }
        }
    }
    Some(neg)
}

/// Partition whose row set (completed by the vacuum above) is `rows`.
fn partition_of_rows(e0: i64, n: usize, rows: &[i64]) -> Option<Partition> {
    let mut parts = Vec::with_capacity(n);
    for (k, r) in rows.iter().enumerate() {
        let p = e0 + k as i64 - r;
        if p < 0 {
            return None;
        }
        parts.push(p as u32);
    }
    Partition::new(parts).ok()
}

/// Three-term relations `π(T∪ac)π(T∪bd) = π(T∪ab)π(T∪cd) + π(T∪ad)π(T∪bc)`
/// among coordinates of weight ≤ `cap`, with `π(T∪ij)` the signed minor on rows
/// in the order `T, i, j`.
pub fn plucker_relations_check(p: &GrassmannPlane, cap: u32) -> CheckReport {
    let mut rep = CheckReport::new(format!("plucker relations, weight <= {cap}"));
    if let Err(e) = p.check_vacuum_pattern() {
        rep.fail("plane", e.to_string(), &[]);
        return rep;
    }
    let e0 = p.vacuum_exponent();
    let n = p.basis.len();
    let floor = p.basis.iter().map(|v| v.floor).max().unwrap_or(e0);
    let rows: Vec<i64> = (floor.max(e0 - cap as i64)..e0 + n as i64).collect();
    let mut memo: HashMap<Partition, Rational> = HashMap::new();
    let mut coord = |set: &[i64]| -> Option<Rational> {
        let mut s = set.to_vec();
        let neg = sort_sign(&mut s)?;
        let l = partition_of_rows(e0, n, &s)?;
        if l.size() > cap {
            return None;
        }
        let v = match memo.get(&l) {
            Some(v) => v.clone(),
            None => {
                let v = plucker_coordinate(p, &l).ok()?;
                memo.insert(l, v.clone());
                v
            }
        };
        Some(if neg { -v } else { v })
    };
    let mut seen = HashSet::new();
    for base in partitions_up_to(cap) {
        let mut full: Vec<i64> = (0..n)
            .map(|k| e0 + k as i64 - base.part(k) as i64)
            .collect();
        full.sort();
        for x in 0..n {
            for y in x + 1..n {
                let t: Vec<i64> = full
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != x && *i != y)
                    .map(|(_, v)| *v)
                    .collect();
                let free: Vec<i64> = rows.iter().copied().filter(|r| !t.contains(r)).collect();
                for (ia, &a) in free.iter().enumerate() {
                    for (ib, &b) in free.iter().enumerate().skip(ia + 1) {
                        for (ic, &c) in free.iter().enumerate().skip(ib + 1) {
                            for &d in free.iter().skip(ic + 1) {
                                if !seen.insert((t.clone(), a, b, c, d)) {
                                    continue;
                                }
                                let with = |i: i64, j: i64| {
                                    let mut v = t.clone();
                                    v.push(i);
                                    v.push(j);
                                    v
                                };
                                let vals: Option<Vec<Rational>> =
                                    [(a, c), (b, d), (a, b), (c, d), (a, d), (b, c)]
                                        .iter()
                                        .map(|&(i, j)| coord(&with(i, j)))
                                        .collect();
                                let Some(v) = vals else { continue };
                                let lhs = &v[0] * &v[1];
                                let rhs = &v[2] * &v[3] + &v[4] * &v[5];
                                rep.expect(
                                    lhs == rhs,
                                    || format!("T={t:?} a,b,c,d={a},{b},{c},{d}"),
                                    "three-term relation fails",
                                    &[lhs.clone(), rhs.clone()],
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    rep
}

/// `y^d · w_k` lies in `W_m + span(next)` for every basis vector whose image
/// stays inside the basis window. Components along `next` are counted and
/// reported; they vanish exactly when the plane itself is `y^d`-invariant.
pub fn reduction_check(p: &GrassmannPlane, d: usize) -> CheckReport {
    let mut rep = CheckReport::new(format!("y^{d} reduction, charge {}", p.m));
    let n = p.basis.len();
    let mut outside = 0;
    for k in 0..n.saturating_sub(d) {
        let v = p.basis[k].shift(d as i64);
        let Some(mut r) = p.reduce(&v) else {
            rep.fail(format!("vector {k}"), "image leaves the basis window", &[]);
            continue;
        };
        if let Some(next) = &p.next {
            let c = r.coeff(next.leading_exponent);
            if !c.is_zero() {
                outside += 1;
                r = r.sub_scaled(&c, next);
            }
        }
        let residue: Vec<Rational> = r.coeffs.values().cloned().collect();
        rep.expect(
            residue.is_empty(),
            || format!("vector {k}"),
            "y^d·w not in the flag",
            &residue,
        );
    }
    rep.note(if outside == 0 {
        "plane is y^d-invariant".to_string()
    } else {
        format!("{outside} images need the charge m+1 vector: y^d W_m lies in W_(m+1) only")
    });
    rep
}

/// Every basis vector of `lower` lies in the span of `upper`.
pub fn flag_check(lower: &GrassmannPlane, upper: &GrassmannPlane) -> CheckReport {
    let mut rep = CheckReport::new(format!("flag W_{} in W_{}", lower.m, upper.m));
    for (k, v) in lower.basis.iter().enumerate() {
        if let Some(r) = upper.reduce(v) {
            let residue: Vec<Rational> = r.coeffs.values().cloned().collect();
            rep.expect(
                residue.is_empty(),
                || format!("vector {k}"),
                "not in the larger plane",
                &residue,
            );
        }
    }
    rep
}
