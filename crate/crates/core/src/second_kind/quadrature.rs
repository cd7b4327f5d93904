//! Contour quadrature for `ν(s, x)`.
//!
//! The contour comes in from infinity along the ray at angle `θ_-`, follows an
//! arc of radius `r_0` across the positive real axis, and leaves along the ray
//! at `θ_+`. For Gould-Hopper configurations `θ_± = ±2π/(d+1)`, which makes
//! `ν(-1, x) = 2πi·Ai(x)` at `d = 2`. Each segment is integrated with adaptive
//! Gauss-Kronrod (7, 15).

use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::family::FamilyConfig;
use crate::rational::to_f64;
use crate::report::NumericReport;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Relative tolerance applied to identity residuals.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct ContourSpec {
    pub d: usize,
    /// `(θ_-, θ_+)`: the contour arrives along `θ_-` and leaves along `θ_+`.
    pub ray_angles: (f64, f64),
    /// Lower bound on the truncation radius; raised per evaluation when the
    /// decay estimate demands it.
    pub radius_cap: f64,
    /// Initial Gauss-Kronrod panels per segment.
    pub node_count: usize,
    /// Radius of the arc around `z = 0`; `None` runs both rays into the origin.
    pub detour_radius: Option<f64>,
    /// Absolute error target for the whole contour.
    pub tolerance: f64,
    pub max_subdivisions: usize,
}

impl ContourSpec {
    /// Decay rays adjacent to the steepest-descent direction closest to the
    /// positive real axis, with a unit detour arc.
    pub fn for_config(cfg: &FamilyConfig) -> Result<Self> {
        let d = cfg.d();
        if d < 2 {
            return Err(Error::DegenerateContour(d));
        }
        let lead = to_f64(&cfg.q_coeffs()[d]);
        let arg = if lead < 0.0 { PI } else { 0.0 };
        let n = (d + 1) as f64;
        let step = 2.0 * PI / n;
        let mut base = (PI - arg) / n;
        while base > PI / n {
            base -= step;
        }
        Ok(ContourSpec {
            d,
            ray_angles: (base - step, base + step),
            radius_cap: 4.0,
            node_count: 8,
            detour_radius: Some(1.0),
            tolerance: 1e-10,
            max_subdivisions: 4000,
        })
    }

    pub fn with_node_count(mut self, n: usize) -> Self {
        self.node_count = n.max(1);
        self
    }

    pub fn with_detour(mut self, r: Option<f64>) -> Self {
        self.detour_radius = r;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NuValue {
    pub value: Complex64,
    pub error_estimate: f64,
}

impl NuValue {
    /// `ν / (2πi)`, the normalization under which `d = 2, s = -1` is `Ai(x)`.
    pub fn normalized(&self) -> Complex64 {
        self.value / Complex64::new(0.0, 2.0 * PI)
    }
}

struct Integrand {
    coeffs: Vec<f64>,
    exponent: Complex64,
    x: Complex64,
}

impl Integrand {
    /// `z^{-s-1+k} exp(q(z) + xz)` on the branch where `arg z = phi`.
    fn log_eval(&self, r: f64, phi: f64) -> Complex64 {
        let z = Complex64::from_polar(r, phi);
        let mut qz = Complex64::zero();
        for c in self.coeffs.iter().rev() {
            qz = (qz + c) * z;
        }
        let logz = Complex64::new(r.ln(), phi);
        self.exponent * logz + qz + self.x * z
    }

    fn eval(&self, r: f64, phi: f64) -> Complex64 {
        self.log_eval(r, phi).exp()
    }
}

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (i, (&xk, &wk)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let f1 = f(c - h * xk);
        let f2 = f(c + h * xk);
        kron += (f1 + f2) * wk;
        if i % 2 == 1 {
            gauss += (f1 + f2) * WG[i / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&o.error)
    }
}

fn adaptive<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    panels: usize,
    tol: f64,
    max_sub: usize,
) -> Result<(Complex64, f64)> {
    let mut heap = BinaryHeap::new();
    let w = (b - a) / panels as f64;
    for i in 0..panels {
        let (pa, pb) = (a + w * i as f64, a + w * (i + 1) as f64);
        let (value, error) = gk15(f, pa, pb);
        heap.push(Panel {
            a: pa,
            b: pb,
            value,
            error,
        });
    }
    for _ in 0..max_sub {
        let err: f64 = heap.iter().map(|p| p.error).sum();
        if err <= tol {
            break;
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        for (pa, pb) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = gk15(f, pa, pb);
            heap.push(Panel {
                a: pa,
                b: pb,
                value,
                error,
            });
        }
    }
    let value: Complex64 = heap.iter().map(|p| p.value).sum();
    let error: f64 = heap.iter().map(|p| p.error).sum();
    if !(error <= tol) || !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::NonConvergence {
            estimate: error,
            tolerance: tol,
        });
    }
    Ok((value, error))
}

/// Radius beyond which the integrand is below `e^{-46}` on both rays.
fn truncation_radius(f: &Integrand, spec: &ContourSpec) -> f64 {
    let (ta, tb) = spec.ray_angles;
    let below = |r: f64| f.log_eval(r, ta).re < -46.0 && f.log_eval(r, tb).re < -46.0;
    let mut r = spec.radius_cap.max(spec.detour_radius.unwrap_or(0.0) + 1.0);
    while !(below(r) && below(1.1 * r) && below(1.25 * r)) {
        r *= 1.1;
        if r > 1e6 {
            break;
        }
    }
    r
}

/// `∫_C z^{-s-1+k} exp(q(z) + xz) dz`.
pub(crate) fn contour_integral(
    cfg: &FamilyConfig,
    s: Complex64,
    x: Complex64,
    extra_power: u32,
    spec: &ContourSpec,
) -> Result<NuValue> {
    if cfg.d() < 2 || spec.d != cfg.d() {
        return Err(Error::DegenerateContour(cfg.d()));
    }
    let exponent = -s - 1.0 + extra_power as f64;
    if spec.detour_radius.is_none() && exponent.re <= -1.0 + 1e-12 {
        return Err(Error::ContourThroughOrigin { s: format!("{s}") });
    }
    let f = Integrand {
        coeffs: cfg.q_coeffs().iter().map(to_f64).collect(),
        exponent,
        x,
    };
    let (ta, tb) = spec.ray_angles;
    let r0 = spec.detour_radius.unwrap_or(0.0);
    let big = truncation_radius(&f, spec);
    let tol = spec.tolerance / 3.0;
    let panels = spec.node_count;
    let ea = Complex64::from_polar(1.0, ta);
    let eb = Complex64::from_polar(1.0, tb);
    // Near the origin a ray integrand may be singular at r = 0 (integrable);
    // Gauss-Kronrod never evaluates endpoints.
    let incoming = adaptive(
        &|r: f64| -f.eval(r, ta) * ea,
        r0,
        big,
        panels,
        tol,
        spec.max_subdivisions,
    )?;
    let outgoing = adaptive(
        &|r: f64| f.eval(r, tb) * eb,
        r0,
        big,
        panels,
        tol,
        spec.max_subdivisions,
    )?;
    let mut value = incoming.0 + outgoing.0;
    let mut error = incoming.1 + outgoing.1;
    if r0 > 0.0 {
        let arc = adaptive(
            &|phi: f64| f.eval(r0, phi) * Complex64::new(0.0, 1.0) * Complex64::from_polar(r0, phi),
            ta,
            tb,
            panels,
            tol,
            spec.max_subdivisions,
        )?;
        value += arc.0;
        error += arc.1;
    }
    Ok(NuValue {
        value,
        error_estimate: error,
    })
}

/// Numerical `ν(s, x)` with its quadrature error estimate.
pub fn eval_nu(
    cfg: &FamilyConfig,
    s: Complex64,
    x: Complex64,
    quad: &ContourSpec,
) -> Result<NuValue> {
    contour_integral(cfg, s, x, 0, quad)
}

/// Residuals of the differential equation, the recurrence and the lowering
/// relation at one `(s, x)`:
///
/// * `q'(∂)∂ν + x∂ν − sν` (for Gould-Hopper `−∂^{d+1}ν + x∂ν − sν`),
/// * `xν(s) − (s+1)ν(s+1) + Σ_j j a_j ν(s−j+1)` (Gould-Hopper: `− ν(s−d)`),
/// * `∂ν(s) − ν(s−1)`.
///
/// Derivatives in `x` are taken under the integral as powers of `z`.
pub fn residual_checks(
    cfg: &FamilyConfig,
    s: Complex64,
    x: Complex64,
    quad: &ContourSpec,
) -> Result<NumericReport> {
    let mut rep = NumericReport::new("second-kind identities", RESIDUAL_TOLERANCE);
    let a: Vec<f64> = cfg.q_coeffs().iter().map(to_f64).collect();
    let ja = |j: usize| j as f64 * a[j - 1];

    let mut terms: Vec<(Complex64, NuValue)> = Vec::new();
    for j in 1..=cfg.d() + 1 {
        if a[j - 1] != 0.0 {
            terms.push((ja(j).into(), contour_integral(cfg, s, x, j as u32, quad)?));
        }
    }
    terms.push((x, contour_integral(cfg, s, x, 1, quad)?));
    terms.push((-s, contour_integral(cfg, s, x, 0, quad)?));
    push_combination(&mut rep, "differential equation", &terms);

    let mut terms: Vec<(Complex64, NuValue)> = vec![
        (x, contour_integral(cfg, s, x, 0, quad)?),
        (-(s + 1.0), contour_integral(cfg, s + 1.0, x, 0, quad)?),
    ];
    for j in 1..=cfg.d() + 1 {
        if a[j - 1] != 0.0 {
            terms.push((
                ja(j).into(),
                contour_integral(cfg, s - (j as f64) + 1.0, x, 0, quad)?,
            ));
        }
    }
    push_combination(&mut rep, "recurrence", &terms);

    let terms = vec![
        (
            Complex64::new(1.0, 0.0),
            contour_integral(cfg, s, x, 1, quad)?,
        ),
        (
            Complex64::new(-1.0, 0.0),
            contour_integral(cfg, s - 1.0, x, 0, quad)?,
        ),
    ];
    push_combination(&mut rep, "lowering", &terms);
    Ok(rep)
}

fn push_combination(rep: &mut NumericReport, name: &str, terms: &[(Complex64, NuValue)]) {
    let total: Complex64 = terms.iter().map(|(c, v)| c * v.value).sum();
    let scale: f64 = terms.iter().map(|(c, v)| (c * v.value).norm()).sum();
    let err: f64 = terms.iter().map(|(c, v)| c.norm() * v.error_estimate).sum();
    rep.push(name, total.norm(), scale, err);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gould_hopper_rays() {
        let spec = ContourSpec::for_config(&FamilyConfig::gould_hopper(2)).unwrap();
        assert!((spec.ray_angles.0 + 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((spec.ray_angles.1 - 2.0 * PI / 3.0).abs() < 1e-15);
        assert_eq!(
            ContourSpec::for_config(&FamilyConfig::gould_hopper(1)).unwrap_err(),
            Error::DegenerateContour(1)
        );
    }

    #[test]
    fn origin_needs_detour() {
        let cfg = FamilyConfig::gould_hopper(2);
        let spec = ContourSpec::for_config(&cfg).unwrap().with_detour(None);
        let err = eval_nu(
            &cfg,
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            &spec,
        )
        .unwrap_err();
        assert!(matches!(err, Error::ContourThroughOrigin { .. }));
        // s = -2 is integrable at the origin: no detour needed, same value.
        let with = ContourSpec::for_config(&cfg).unwrap();
        let a = eval_nu(&cfg, (-2.0).into(), 0.3.into(), &spec).unwrap();
        let b = eval_nu(&cfg, (-2.0).into(), 0.3.into(), &with).unwrap();
        assert!((a.value - b.value).norm() < 1e-9);
    }

    #[test]
    fn lowering_is_exact_at_origin() {
        let cfg = FamilyConfig::gould_hopper(2);
        let spec = ContourSpec::for_config(&cfg).unwrap();
        let rep = residual_checks(&cfg, (-1.0).into(), 0.0.into(), &spec).unwrap();
        assert!(rep.passed, "{rep:?}");
    }
}
