//! Module-of-curve-families primitives: densities, rectifiable polylines,
//! curve samplers, p-energies, and the admissibility / extremality checks
//! that every other subsystem leans on.

use crate::error::{Error, Result};
use crate::numerics::quad::{integrate_1d, integrate_2d, QuadResult};
use std::sync::Arc;

/// How a module value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Quadrature,
    Oracle,
}

/// A computed p-module with its provenance and error bound.
#[derive(Debug, Clone, Copy)]
pub struct ModuleEstimate {
    pub value: f64,
    pub method: Method,
    pub abs_error: f64,
    pub p: f64,
}

impl ModuleEstimate {
    pub fn new(value: f64, method: Method, abs_error: f64, p: f64) -> Self {
        debug_assert!(value >= 0.0 && abs_error >= 0.0);
        Self {
            value,
            method,
            abs_error,
            p,
        }
    }
}

/// Integration domains used by the energy functional. Each variant knows
/// how to integrate a smooth function over itself through a coordinate
/// change, so no discontinuous indicator ever reaches the quadrature.
#[derive(Clone)]
pub enum Region {
    /// Axis-aligned box in dimension 1..=3.
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// Planar annulus r_inner <= |y| <= r_outer centered at the origin.
    Annulus { r_inner: f64, r_outer: f64 },
    /// Image of [0,1] x [0, h sin(theta)] under (x,t) -> (x + t cot(theta), t):
    /// the slanted parallelogram with unit base.
    ShearQuadrilateral { theta: f64, h: f64 },
}

impl Region {
    pub fn rect(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Region::Box {
            lo: vec![x0, y0],
            hi: vec![x1, y1],
        }
    }

    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            Region::Box { lo, hi } => (lo.clone(), hi.clone()),
            Region::Annulus { r_outer, .. } => {
                (vec![-r_outer, -r_outer], vec![*r_outer, *r_outer])
            }
            Region::ShearQuadrilateral { theta, h } => {
                let height = h * theta.sin();
                let shift = height * theta.cos() / theta.sin();
                (
                    vec![shift.min(0.0), 0.0],
                    vec![1.0 + shift.max(0.0), height],
                )
            }
        }
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        match self {
            Region::Box { lo, hi } => y
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(v, (l, h))| *v >= *l && *v <= *h),
            Region::Annulus { r_inner, r_outer } => {
                let r = (y[0] * y[0] + y[1] * y[1]).sqrt();
                r >= *r_inner && r <= *r_outer
            }
            Region::ShearQuadrilateral { theta, h } => {
                let height = h * theta.sin();
                let cot = theta.cos() / theta.sin();
                let t = y[1];
                let x = y[0] - t * cot;
                (0.0..=height).contains(&t) && (0.0..=1.0).contains(&x)
            }
        }
    }

    /// Lebesgue integral of `f` over the region.
    pub fn integrate(&self, f: &dyn Fn(&[f64]) -> f64, tol: f64) -> Result<QuadResult> {
        match self {
            Region::Box { lo, hi } => match lo.len() {
                1 => integrate_1d(|x| f(&[x]), lo[0], hi[0], tol),
                2 => integrate_2d(|x, y| f(&[x, y]), lo[0], hi[0], lo[1], hi[1], tol),
                3 => {
                    let (l, h) = (lo.clone(), hi.clone());
                    integrate_1d(
                        move |z| {
                            integrate_2d(|x, y| f(&[x, y, z]), l[0], h[0], l[1], h[1], tol / 10.0)
                                .map(|r| r.value)
                                .unwrap_or(f64::NAN)
                        },
                        lo[2],
                        hi[2],
                        tol,
                    )
                }
                n => Err(Error::Domain(format!(
                    "box integration supports dimensions 1..=3, got {n}"
                ))),
            },
            Region::Annulus { r_inner, r_outer } => integrate_2d(
                |theta, r| f(&[r * theta.cos(), r * theta.sin()]) * r,
                0.0,
                std::f64::consts::TAU,
                *r_inner,
                *r_outer,
                tol,
            ),
            Region::ShearQuadrilateral { theta, h } => {
                let cot = theta.cos() / theta.sin();
                // Unit Jacobian shear back to the rectangle.
                integrate_2d(
                    |x, t| f(&[x + t * cot, t]),
                    0.0,
                    1.0,
                    0.0,
                    h * theta.sin(),
                    tol,
                )
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    ClosedForm,
    Grid,
}

type FieldFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A nonnegative density with an exponent attached. Closed-form fields
/// wrap a function; grid fields come from the discrete oracle.
#[derive(Clone)]
pub struct DensityField {
    pub kind: FieldKind,
    eval: FieldFn,
    pub support: Region,
    pub exponent_p: f64,
}

impl DensityField {
    pub fn closed_form<F>(p: f64, support: Region, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if !(p > 1.0) {
            return Err(Error::Domain(format!("density exponent must be > 1, got {p}")));
        }
        Ok(Self {
            kind: FieldKind::ClosedForm,
            eval: Arc::new(f),
            support,
            exponent_p: p,
        })
    }

    pub fn with_kind(mut self, kind: FieldKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        (self.eval)(y)
    }

    /// Pointwise rescaled copy (c >= 0).
    pub fn scaled(&self, c: f64) -> Self {
        let inner = self.eval.clone();
        Self {
            kind: self.kind,
            eval: Arc::new(move |y| c * inner(y)),
            support: self.support.clone(),
            exponent_p: self.exponent_p,
        }
    }
}

/// An ordered piecewise-linear curve with positive total length.
#[derive(Debug, Clone)]
pub struct Polyline {
    vertices: Vec<Vec<f64>>,
    seg_lengths: Vec<f64>,
    total_length: f64,
}

impl Polyline {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidCurve(format!(
                "polyline needs at least 2 vertices, got {}",
                vertices.len()
            )));
        }
        let dim = vertices[0].len();
        if vertices.iter().any(|v| v.len() != dim) {
            return Err(Error::InvalidCurve("mixed vertex dimensions".into()));
        }
        let mut seg_lengths = Vec::with_capacity(vertices.len() - 1);
        for w in vertices.windows(2) {
            let len = w[0]
                .iter()
                .zip(&w[1])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if len == 0.0 {
                return Err(Error::InvalidCurve(
                    "consecutive vertices must be distinct".into(),
                ));
            }
            seg_lengths.push(len);
        }
        let total_length = seg_lengths.iter().sum();
        Ok(Self {
            vertices,
            seg_lengths,
            total_length,
        })
    }

    /// Sample a smooth parametrized curve on `n` equal parameter steps.
    pub fn from_fn<F: Fn(f64) -> Vec<f64>>(f: F, t0: f64, t1: f64, n: usize) -> Result<Self> {
        let n = n.max(1);
        let vertices = (0..=n)
            .map(|i| f(t0 + (t1 - t0) * i as f64 / n as f64))
            .collect();
        Self::new(vertices)
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn length(&self) -> f64 {
        self.total_length
    }

    /// Concatenation; the endpoint of `self` must coincide with the start
    /// of `other`.
    pub fn concat(&self, other: &Polyline) -> Result<Polyline> {
        let mut vertices = self.vertices.clone();
        let joint = vertices.last().unwrap();
        let gap: f64 = joint
            .iter()
            .zip(&other.vertices[0])
            .map(|(a, b)| (a - b).abs())
            .sum();
        if gap > 1e-12 {
            return Err(Error::InvalidCurve("concatenation endpoints differ".into()));
        }
        vertices.extend(other.vertices.iter().skip(1).cloned());
        Polyline::new(vertices)
    }
}

// Gauss-Legendre 8-point rule on [-1, 1].
const GL8_X: [f64; 4] = [
    0.1834346424956498,
    0.5255324099163290,
    0.7966664774136267,
    0.9602898564975363,
];
const GL8_W: [f64; 4] = [
    0.3626837833783620,
    0.3137066458778873,
    0.2223810344533745,
    0.1012285362903763,
];

fn segment_integral(rho: &DensityField, a: &[f64], b: &[f64], len: f64, panels: usize) -> f64 {
    let mut sum = 0.0;
    let pw = 1.0 / panels as f64;
    let mut point = vec![0.0; a.len()];
    for panel in 0..panels {
        let u0 = panel as f64 * pw;
        let uc = u0 + 0.5 * pw;
        for k in 0..4 {
            for sgn in [-1.0, 1.0] {
                let u = uc + sgn * 0.5 * pw * GL8_X[k];
                for (d, pd) in point.iter_mut().enumerate() {
                    *pd = a[d] + u * (b[d] - a[d]);
                }
                sum += GL8_W[k] * rho.eval(&point);
            }
        }
    }
    sum * 0.5 * pw * len
}

/// Line integral of a density along a polyline: fixed-order Gauss panels
/// per segment, with panel halving until the whole-curve value settles to
/// a relative change below 1e-10.
pub fn curve_integral(rho: &DensityField, gamma: &Polyline) -> Result<f64> {
    let mut panels = 1usize;
    let mut prev = f64::NAN;
    loop {
        let mut total = 0.0;
        for (w, len) in gamma.vertices.windows(2).zip(&gamma.seg_lengths) {
            total += segment_integral(rho, &w[0], &w[1], *len, panels);
        }
        if !prev.is_nan() {
            let change = (total - prev).abs();
            if change <= 1e-10 * total.abs().max(1e-30) || panels >= 64 {
                return Ok(total);
            }
        }
        prev = total;
        panels *= 2;
    }
}

/// p-energy of a density over a region, with absolute error near `tol`.
pub fn energy(rho: &DensityField, p: f64, domain: &Region, tol: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::Domain(format!("energy exponent must be > 1, got {p}")));
    }
    match domain.integrate(&|y| rho.eval(y).powf(p), tol) {
        Ok(r) => Ok(r.value),
        Err(Error::QuadratureNonConvergence { value, .. }) => {
            Err(Error::DivergentEnergy { partial: value })
        }
        Err(e) => Err(e),
    }
}

type SamplerFn = Arc<dyn Fn(&[f64]) -> Result<Polyline> + Send + Sync>;

/// A parametrized family of curves (one or two parameters), sampled on a
/// grid for the certification routines.
#[derive(Clone)]
pub struct CurveFamily {
    pub param_ranges: Vec<(f64, f64)>,
    sampler: SamplerFn,
    pub count_hint: usize,
}

impl CurveFamily {
    pub fn new<F>(param_ranges: Vec<(f64, f64)>, count_hint: usize, sampler: F) -> Self
    where
        F: Fn(&[f64]) -> Result<Polyline> + Send + Sync + 'static,
    {
        Self {
            param_ranges,
            sampler: Arc::new(sampler),
            count_hint,
        }
    }

    pub fn sample(&self, params: &[f64]) -> Result<Polyline> {
        (self.sampler)(params)
    }

    /// Inclusive uniform grid with roughly `n` points over the parameter box.
    pub fn grid_params(&self, n: usize) -> Vec<Vec<f64>> {
        let dims = self.param_ranges.len();
        let per_dim = match dims {
            1 => vec![n.max(1)],
            _ => {
                let side = (n as f64).powf(1.0 / dims as f64).round().max(1.0) as usize;
                vec![side; dims]
            }
        };
        let mut grids: Vec<Vec<f64>> = Vec::new();
        for (d, &(lo, hi)) in self.param_ranges.iter().enumerate() {
            let m = per_dim[d];
            let pts = if m == 1 {
                vec![0.5 * (lo + hi)]
            } else {
                (0..m)
                    .map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64)
                    .collect()
            };
            grids.push(pts);
        }
        let mut out = vec![Vec::new()];
        for g in grids {
            let mut next = Vec::with_capacity(out.len() * g.len());
            for prefix in &out {
                for v in &g {
                    let mut item = prefix.clone();
                    item.push(*v);
                    next.push(item);
                }
            }
            out = next;
        }
        out
    }
}

/// Outcome of sampling admissibility over a curve family.
#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    pub min_integral: f64,
    pub min_params: Vec<f64>,
    pub sampled_params: Vec<Vec<f64>>,
    pub violating_params: Vec<Vec<f64>>,
    pub tol: f64,
}

impl AdmissibilityReport {
    pub fn admissible(&self) -> bool {
        self.min_integral >= 1.0 - self.tol
    }
}

/// Minimum of the curve integral over a sampled parameter grid. The grid
/// itself is recorded so violations are reproducible.
pub fn check_admissible(
    rho: &DensityField,
    family: &CurveFamily,
    n_samples: usize,
    tol: f64,
) -> Result<AdmissibilityReport> {
    if n_samples == 0 {
        return Err(Error::Domain("n_samples must be >= 1".into()));
    }
    let params = family.grid_params(n_samples);
    let mut min_integral = f64::INFINITY;
    let mut min_params = Vec::new();
    let mut violating = Vec::new();
    for pr in &params {
        let gamma = family.sample(pr)?;
        let integral = curve_integral(rho, &gamma)?;
        if integral < min_integral {
            min_integral = integral;
            min_params = pr.clone();
        }
        if integral < 1.0 - tol {
            violating.push(pr.clone());
        }
    }
    Ok(AdmissibilityReport {
        min_integral,
        min_params,
        sampled_params: params,
        violating_params: violating,
        tol,
    })
}

/// A named signed perturbation used by the extremality test.
#[derive(Clone)]
pub struct Perturbation {
    pub name: String,
    eval: FieldFn,
}

impl Perturbation {
    pub fn new<F>(name: &str, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.to_string(),
            eval: Arc::new(f),
        }
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        (self.eval)(y)
    }
}

#[derive(Debug, Clone)]
pub struct PerturbationOutcome {
    pub name: String,
    /// False when the perturbation failed the curve-wise precondition
    /// (some sampled curve had a negative integral) and was skipped.
    pub retained: bool,
    pub min_curve_integral: f64,
    /// Integral of g * rho0^{p-1} over the support; None when skipped.
    pub inner_product: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct ExtremalityReport {
    pub outcomes: Vec<PerturbationOutcome>,
    pub tol: f64,
}

impl ExtremalityReport {
    /// True when every retained perturbation passed.
    pub fn all_pass(&self) -> bool {
        self.outcomes.iter().filter(|o| o.retained).all(|o| o.pass)
    }
}

/// Perturbation test for extremality: for each signed field g with
/// nonnegative integrals along the sampled curves of the extremal family,
/// the weighted pairing with the candidate density must be nonnegative:
///
///   int g * rho0^{p-1} dm >= -tol.
///
/// A perturbation violating the curve-wise precondition is skipped and
/// reported as not retained.
pub fn check_extremality(
    rho0: &DensityField,
    family0: &CurveFamily,
    perturbations: &[Perturbation],
    p: f64,
    n_samples: usize,
    tol: f64,
) -> Result<ExtremalityReport> {
    let params = family0.grid_params(n_samples);
    let curves: Vec<Polyline> = params
        .iter()
        .map(|pr| family0.sample(pr))
        .collect::<Result<_>>()?;

    let mut outcomes = Vec::with_capacity(perturbations.len());
    for g in perturbations {
        // The curve precondition is evaluated with the same quadrature as
        // curve_integral by wrapping |g| into a signed closed-form field.
        // Negative values are allowed; only the integral sign matters.
        let g_eval = g.clone();
        let signed = DensityField {
            kind: FieldKind::ClosedForm,
            eval: Arc::new(move |y: &[f64]| g_eval.eval(y)),
            support: rho0.support.clone(),
            exponent_p: rho0.exponent_p,
        };
        let mut min_curve = f64::INFINITY;
        for gamma in &curves {
            let v = curve_integral(&signed, gamma)?;
            min_curve = min_curve.min(v);
        }
        let retained = min_curve >= -tol;
        if !retained {
            outcomes.push(PerturbationOutcome {
                name: g.name.clone(),
                retained,
                min_curve_integral: min_curve,
                inner_product: None,
                pass: false,
            });
            continue;
        }
        let g2 = g.clone();
        let rho = rho0.clone();
        let pairing = rho0
            .support
            .integrate(&move |y| g2.eval(y) * rho.eval(y).powf(p - 1.0), 1e-10)?;
        outcomes.push(PerturbationOutcome {
            name: g.name.clone(),
            retained,
            min_curve_integral: min_curve,
            inner_product: Some(pairing.value),
            pass: pairing.value >= -tol,
        });
    }
    Ok(ExtremalityReport { outcomes, tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn uniform_on_rect(a: f64, b: f64, p: f64) -> DensityField {
        DensityField::closed_form(p, Region::rect(0.0, a, 0.0, b), move |_| 1.0 / b).unwrap()
    }

    fn vertical_family(a: f64, b: f64) -> CurveFamily {
        CurveFamily::new(vec![(0.0, a)], 100, move |pr| {
            Polyline::new(vec![vec![pr[0], 0.0], vec![pr[0], b]])
        })
    }

    #[test]
    fn energy_of_rectangle_extremal() {
        // rho = 1/b on [0,a] x [0,b] at p = 2 has energy a/b.
        let (a, b) = (1.0, 2.0);
        let rho = uniform_on_rect(a, b, 2.0);
        let e = energy(&rho, 2.0, &rho.support.clone(), 1e-12).unwrap();
        assert!((e - a / b).abs() < 1e-12);
    }

    #[test]
    fn energy_of_zero_density() {
        let rho = DensityField::closed_form(2.0, Region::rect(0.0, 1.0, 0.0, 1.0), |_| 0.0).unwrap();
        let e = energy(&rho, 2.0, &rho.support.clone(), 1e-12).unwrap();
        assert_eq!(e, 0.0);
    }

    #[test]
    fn energy_on_annulus_log_density() {
        // rho = 1/(r log 2) on 1 <= r <= 2: polar quadrature gives
        // 2 pi / log 2 at p = 2.
        let log2 = 2.0f64.ln();
        let rho = DensityField::closed_form(
            2.0,
            Region::Annulus {
                r_inner: 1.0,
                r_outer: 2.0,
            },
            move |y| 1.0 / ((y[0] * y[0] + y[1] * y[1]).sqrt() * log2),
        )
        .unwrap();
        let e = energy(&rho, 2.0, &rho.support.clone(), 1e-12).unwrap();
        let expected = TAU / log2;
        assert!((e - expected).abs() < 1e-10 * expected);
    }

    #[test]
    fn energy_scaling_power() {
        let rho = uniform_on_rect(1.0, 2.0, 2.0);
        for p in [1.5, 2.0, 3.0] {
            let base = energy(&rho, p, &rho.support.clone(), 1e-12).unwrap();
            let scaled = energy(&rho.scaled(3.0), p, &rho.support.clone(), 1e-12).unwrap();
            assert!((scaled - 3.0f64.powf(p) * base).abs() < 1e-10 * scaled.abs());
        }
    }

    #[test]
    fn curve_integral_unit_on_extremal() {
        // Vertical segment of length b against rho = 1/b integrates to 1.
        let rho = uniform_on_rect(1.0, 2.0, 2.0);
        let seg = Polyline::new(vec![vec![0.5, 0.0], vec![0.5, 2.0]]).unwrap();
        assert!((curve_integral(&rho, &seg).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn curve_integral_zero_density() {
        let rho = DensityField::closed_form(2.0, Region::rect(0.0, 1.0, 0.0, 1.0), |_| 0.0).unwrap();
        let seg = Polyline::new(vec![vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(curve_integral(&rho, &seg).unwrap(), 0.0);
    }

    #[test]
    fn curve_integral_radial_log_density() {
        // rho(r) = 1 / (r log 2) along a radial segment from r=1 to r=2
        // integrates to 1 (antiderivative log r / log 2).
        let log2 = 2.0f64.ln();
        let rho = DensityField::closed_form(
            2.0,
            Region::Annulus {
                r_inner: 1.0,
                r_outer: 2.0,
            },
            move |y| 1.0 / ((y[0] * y[0] + y[1] * y[1]).sqrt() * log2),
        )
        .unwrap();
        let dir = [0.6, 0.8];
        let seg = Polyline::new(vec![vec![dir[0], dir[1]], vec![2.0 * dir[0], 2.0 * dir[1]]])
            .unwrap();
        assert!((curve_integral(&rho, &seg).unwrap() - 1.0).abs() < 1e-11);
    }

    #[test]
    fn curve_integral_additive_under_concat() {
        let rho = DensityField::closed_form(2.0, Region::rect(0.0, 2.0, 0.0, 2.0), |y| {
            (y[0] + 2.0 * y[1]).exp() * 0.1
        })
        .unwrap();
        let first = Polyline::new(vec![vec![0.0, 0.0], vec![1.0, 0.5]]).unwrap();
        let second = Polyline::new(vec![vec![1.0, 0.5], vec![1.5, 1.5], vec![2.0, 1.0]]).unwrap();
        let joined = first.concat(&second).unwrap();
        let sum = curve_integral(&rho, &first).unwrap() + curve_integral(&rho, &second).unwrap();
        let whole = curve_integral(&rho, &joined).unwrap();
        assert!((sum - whole).abs() <= 1e-12 * whole.abs().max(1.0));
    }

    #[test]
    fn degenerate_polylines_rejected() {
        assert!(Polyline::new(vec![vec![0.0, 0.0]]).is_err());
        assert!(Polyline::new(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).is_err());
    }

    #[test]
    fn admissibility_of_rectangle_extremal() {
        let rho = uniform_on_rect(1.0, 2.0, 2.0);
        let fam = vertical_family(1.0, 2.0);
        let rep = check_admissible(&rho, &fam, 50, 1e-9).unwrap();
        assert!(rep.admissible());
        assert!((rep.min_integral - 1.0).abs() < 1e-12);
        assert_eq!(rep.sampled_params.len(), 50);
    }

    #[test]
    fn scaled_down_density_not_admissible() {
        let rho = uniform_on_rect(1.0, 2.0, 2.0).scaled(0.5);
        let fam = vertical_family(1.0, 2.0);
        let rep = check_admissible(&rho, &fam, 20, 1e-9).unwrap();
        assert!(!rep.admissible());
        assert!((rep.min_integral - 0.5).abs() < 1e-12);
        assert_eq!(rep.violating_params.len(), 20);
    }

    #[test]
    fn extremality_constant_and_admissible_perturbations() {
        let (a, b) = (1.0, 2.0);
        let rho0 = uniform_on_rect(a, b, 2.0);
        let fam = vertical_family(a, b);
        let perturbations = vec![
            Perturbation::new("constant", |_| 0.7),
            // g = rho - rho0 with rho = 2/b admissible.
            Perturbation::new("admissible-diff", move |_| 2.0 / b - 1.0 / b),
        ];
        let rep = check_extremality(&rho0, &fam, &perturbations, 2.0, 20, 1e-9).unwrap();
        assert!(rep.all_pass());
        assert!(rep.outcomes.iter().all(|o| o.retained));
        // Constant c pairs to c * (1/b) * (a b) = c a against rho0.
        let ip = rep.outcomes[0].inner_product.unwrap();
        assert!((ip - 0.7 * a).abs() < 1e-9);
    }

    #[test]
    fn perturbed_density_rejected() {
        // rho' = (1/b)(1 + 0.1 sin(2 pi t / b)) keeps unit integrals on the
        // vertical family but is not extremal: the signed difference back
        // toward 1/b has a strictly negative pairing.
        let (a, b) = (1.0, 2.0);
        let rho_perturbed = DensityField::closed_form(
            2.0,
            Region::rect(0.0, a, 0.0, b),
            move |y| (1.0 + 0.1 * (TAU * y[1] / b).sin()) / b,
        )
        .unwrap();
        let fam = vertical_family(a, b);
        // Perturbed field is still admissible on the family...
        let adm = check_admissible(&rho_perturbed, &fam, 20, 1e-9).unwrap();
        assert!(adm.admissible());
        // ...but fails the perturbation test against g = rho0 - rho'.
        let g = Perturbation::new("back-toward-uniform", move |y: &[f64]| {
            -0.1 * (TAU * y[1] / b).sin() / b
        });
        let rep = check_extremality(&rho_perturbed, &fam, &[g], 2.0, 20, 1e-8).unwrap();
        assert!(rep.outcomes[0].retained);
        assert!(!rep.outcomes[0].pass);
        assert!(rep.outcomes[0].inner_product.unwrap() < -1e-4);
    }

    #[test]
    fn violating_perturbation_skipped() {
        let rho0 = uniform_on_rect(1.0, 2.0, 2.0);
        let fam = vertical_family(1.0, 2.0);
        let g = Perturbation::new("negative-constant", |_| -1.0);
        let rep = check_extremality(&rho0, &fam, &[g], 2.0, 10, 1e-9).unwrap();
        assert!(!rep.outcomes[0].retained);
        assert!(rep.outcomes[0].inner_product.is_none());
    }

    #[test]
    fn shear_region_contains_and_area() {
        let region = Region::ShearQuadrilateral {
            theta: PI / 3.0,
            h: 1.0,
        };
        let area = region.integrate(&|_| 1.0, 1e-12).unwrap().value;
        assert!((area - (PI / 3.0).sin()).abs() < 1e-12);
        assert!(region.contains(&[0.5, 0.1]));
        assert!(!region.contains(&[-0.5, 0.1]));
    }
}
