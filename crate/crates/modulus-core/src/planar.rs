//! Two-dimensional theory: directional dilatations of planar maps,
//! the nested-quadrature module formula for images of vertical segments,
//! the radial/circular module formulas on annuli with the resulting ring
//! bounds, logarithmic spirals, and the slanted-parallelogram estimates.

use crate::error::{Error, Result};
use crate::fuglede::{Method, ModuleEstimate};
use crate::numerics::diff::jacobian_fd;
use crate::numerics::quad::{integrate_1d, integrate_2d};
use num_complex::Complex64;
use std::f64::consts::TAU;
use std::sync::Arc;

type MapFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;
type MuFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// An orientation-preserving planar map with optional analytic complex
/// dilatation. Without it, Wirtinger derivatives come from the
/// finite-difference Jacobian.
#[derive(Clone)]
pub struct PlanarMap {
    pub name: String,
    f: MapFn,
    mu: Option<MuFn>,
}

/// Minimum allowed 1 - |mu|^2 before a point is declared irregular.
const REGULARITY_FLOOR: f64 = 1e-12;

impl PlanarMap {
    pub fn new<F>(name: &str, f: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            name: name.to_string(),
            f: Arc::new(f),
            mu: None,
        }
    }

    pub fn with_mu<M>(mut self, mu: M) -> Self
    where
        M: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        self.mu = Some(Arc::new(mu));
        self
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.f)(z)
    }

    /// Wirtinger derivatives (f_z, f_zbar) read off the real 2x2 Jacobian
    /// [[a,b],[c,d]]: f_z = ((a+d) + i(c-b))/2, f_zbar = ((a-d) + i(c+b))/2.
    pub fn wirtinger(&self, z: Complex64) -> (Complex64, Complex64) {
        let j = jacobian_fd(
            |p| {
                let w = self.eval(Complex64::new(p[0], p[1]));
                vec![w.re, w.im]
            },
            &[z.re, z.im],
            0.0,
        );
        let (a, b, c, d) = (j[0][0], j[0][1], j[1][0], j[1][1]);
        let fz = Complex64::new((a + d) / 2.0, (c - b) / 2.0);
        let fzb = Complex64::new((a - d) / 2.0, (c + b) / 2.0);
        (fz, fzb)
    }

    /// Complex dilatation mu_f = f_zbar / f_z at z.
    pub fn mu(&self, z: Complex64) -> Complex64 {
        match &self.mu {
            Some(m) => m(z),
            None => {
                let (fz, fzb) = self.wirtinger(z);
                fzb / fz
            }
        }
    }

    /// Jacobian determinant |f_z|^2 (1 - |mu|^2).
    pub fn jacobian(&self, z: Complex64) -> f64 {
        let (fz, fzb) = self.wirtinger(z);
        fz.norm_sqr() - fzb.norm_sqr()
    }

    /// Directional dilatation at z in direction alpha.
    pub fn dilatation(&self, z: Complex64, alpha: f64) -> Result<f64> {
        directional_dilatation(self.mu(z), alpha)
    }

    /// D_{f,theta}: distortion along the radial direction at z.
    pub fn dilatation_radial(&self, z: Complex64) -> Result<f64> {
        self.dilatation(z, z.arg())
    }

    /// D_{f,theta+pi/2}: distortion along the tangential direction at z.
    pub fn dilatation_tangential(&self, z: Complex64) -> Result<f64> {
        self.dilatation(z, z.arg() + std::f64::consts::FRAC_PI_2)
    }
}

/// D_{f,alpha} = |1 + e^{-2 i alpha} mu|^2 / (1 - |mu|^2).
pub fn directional_dilatation(mu: Complex64, alpha: f64) -> Result<f64> {
    let m2 = mu.norm_sqr();
    if m2 >= 1.0 {
        return Err(Error::Orientation(mu.norm()));
    }
    if 1.0 - m2 < REGULARITY_FLOOR {
        return Err(Error::DegenerateParametrization(format!(
            "point is not regular: 1 - |mu|^2 = {}",
            1.0 - m2
        )));
    }
    let phase = Complex64::from_polar(1.0, -2.0 * alpha);
    Ok((Complex64::new(1.0, 0.0) + phase * mu).norm_sqr() / (1.0 - m2))
}

/// A normalized ring domain 1 <= |z| <= b together with the map under study.
#[derive(Clone)]
pub struct RingDomain {
    pub outer_radius: f64,
    pub map: PlanarMap,
}

impl RingDomain {
    pub fn new(outer_radius: f64, map: PlanarMap) -> Result<Self> {
        if !(outer_radius > 1.0) {
            return Err(Error::Domain(format!(
                "ring outer radius must exceed 1, got {outer_radius}"
            )));
        }
        Ok(Self { outer_radius, map })
    }
}

/// 2-module of the images of the vertical segments of the rectangle
/// [x0,x1] x [t0,t1]:
///
///   l(x)  = int |c'_x|^2 / J_f dt ,   M = int l(x)^{-1} dx,
///
/// with c_x(t) = f(x + it) and the t-derivative by central differences.
pub fn rodin2d_module(
    map: &PlanarMap,
    x0: f64,
    x1: f64,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<ModuleEstimate> {
    let dt = (t1 - t0) * 1e-5;
    // The difference quotient for c'_x carries rounding noise around 5e-12
    // relative; the inner tolerance must stay above that floor.
    let inner_tol = (tol / 10.0).max(1e-11);
    let ell = |x: f64| -> Result<f64> {
        let r = integrate_1d(
            |t| {
                let up = map.eval(Complex64::new(x, t + dt));
                let dn = map.eval(Complex64::new(x, t - dt));
                let cdot = (up - dn) / (2.0 * dt);
                let jf = map.jacobian(Complex64::new(x, t));
                cdot.norm_sqr() / jf
            },
            t0,
            t1,
            inner_tol,
        )?;
        if !(r.value > 0.0) {
            return Err(Error::DegenerateParametrization(format!(
                "l({x}) = {} is not positive; the map must have J_f > 0",
                r.value
            )));
        }
        Ok(r.value)
    };
    let failure = std::cell::RefCell::new(None);
    let outer = integrate_1d(
        |x| match ell(x) {
            Ok(v) => 1.0 / v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        x0,
        x1,
        tol,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let outer = outer?;
    Ok(ModuleEstimate::new(
        outer.value,
        Method::Quadrature,
        outer.abs_error_estimate,
        2.0,
    ))
}

fn radial_ell(ring: &RingDomain, theta: f64) -> Result<f64> {
    let failure = std::cell::RefCell::new(None);
    let r = integrate_1d(
        |r| {
            let z = Complex64::from_polar(r, theta);
            match ring.map.dilatation_radial(z) {
                Ok(d) => d / r,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            }
        },
        1.0,
        ring.outer_radius,
        1e-12,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(r?.value)
}

/// 2-module of the image of the radial segments of the ring:
/// M = int_0^{2pi} ( int_1^b D_{f,theta} / r dr )^{-1} dtheta.
pub fn annulus_radial_image_module(ring: &RingDomain) -> Result<ModuleEstimate> {
    let failure = std::cell::RefCell::new(None);
    let outer = integrate_1d(
        |theta| match radial_ell(ring, theta) {
            Ok(v) => 1.0 / v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        TAU,
        1e-11,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let outer = outer?;
    Ok(ModuleEstimate::new(
        outer.value,
        Method::Quadrature,
        outer.abs_error_estimate,
        2.0,
    ))
}

/// Density extremal for the radial-image module, evaluated along the
/// parametrized image curves: returns rho0(f(r e^{i theta})) so that
/// int_1^b rho0(f(..)) |f_r| dr = 1 for every theta.
pub fn radial_image_density(ring: &RingDomain) -> impl Fn(f64, f64) -> f64 + '_ {
    move |r: f64, theta: f64| {
        let ell = radial_ell(ring, theta).unwrap_or(f64::NAN);
        let z = Complex64::from_polar(r, theta);
        let d = ring.map.dilatation_radial(z).unwrap_or(f64::NAN);
        let fr = radial_derivative(&ring.map, z).norm();
        (d / r) / (fr * ell)
    }
}

/// Central-difference df/dr at z (derivative in the modulus direction).
pub fn radial_derivative(map: &PlanarMap, z: Complex64) -> Complex64 {
    let r = z.norm();
    let h = r * 1e-6;
    let u = z / r;
    (map.eval(z + u * h) - map.eval(z - u * h)) / (2.0 * h)
}

/// Central-difference df/dtheta at z.
pub fn angular_derivative(map: &PlanarMap, z: Complex64) -> Complex64 {
    let h = 1e-6;
    let rot_p = Complex64::from_polar(1.0, h);
    let rot_m = Complex64::from_polar(1.0, -h);
    (map.eval(z * rot_p) - map.eval(z * rot_m)) / (2.0 * h)
}

/// 2-module of the image of the concentric circles of the ring:
/// M = int_1^b ( int_0^{2pi} D_{f,theta+pi/2} dtheta )^{-1} dr / r.
pub fn annulus_circle_image_module(ring: &RingDomain) -> Result<ModuleEstimate> {
    let failure = std::cell::RefCell::new(None);
    let outer = integrate_1d(
        |r| {
            let inner = integrate_1d(
                |theta| {
                    let z = Complex64::from_polar(r, theta);
                    match ring.map.dilatation_tangential(z) {
                        Ok(d) => d,
                        Err(e) => {
                            failure.borrow_mut().get_or_insert(e);
                            f64::NAN
                        }
                    }
                },
                0.0,
                TAU,
                1e-12,
            );
            match inner {
                Ok(v) => 1.0 / (v.value * r),
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            }
        },
        1.0,
        ring.outer_radius,
        1e-11,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let outer = outer?;
    Ok(ModuleEstimate::new(
        outer.value,
        Method::Quadrature,
        outer.abs_error_estimate,
        2.0,
    ))
}

/// Two-sided bracket for the conformal module of the image ring, plus the
/// weaker Cauchy-Schwarz upper bound (2pi)^{-2} int D_{f,theta} / |z|^2 dm.
#[derive(Debug, Clone, Copy)]
pub struct RingBounds {
    pub lower: f64,
    pub upper: f64,
    pub cauchy_schwarz_upper: f64,
}

pub fn ring_module_bounds(ring: &RingDomain) -> Result<RingBounds> {
    let lower = annulus_circle_image_module(ring)?.value;
    let upper = 1.0 / annulus_radial_image_module(ring)?.value;
    let failure = std::cell::RefCell::new(None);
    let cs = integrate_2d(
        |theta, r| {
            let z = Complex64::from_polar(r, theta);
            match ring.map.dilatation_radial(z) {
                // dm = r dr dtheta against |z|^{-2} leaves D / r.
                Ok(d) => d / r,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            }
        },
        0.0,
        TAU,
        1.0,
        ring.outer_radius,
        1e-10,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let cs = cs?.value / (TAU * TAU);
    Ok(RingBounds {
        lower,
        upper,
        cauchy_schwarz_upper: cs,
    })
}

/// 2-module of the image under the ring map of the logarithmic spirals of
/// inclination beta:
///
///   M = int_0^{2pi} ( int_1^b (1+beta^2) D_{f,theta_0} dr/r )^{-1} dtheta,
///
/// where theta_0 = theta - beta log r - arctan(beta) is the direction of
/// the spiral tangent at r e^{i(theta - beta log r)}.
pub fn log_spiral_image_module(ring: &RingDomain, beta: f64) -> Result<ModuleEstimate> {
    let b = ring.outer_radius;
    let coeff = 1.0 + beta * beta;
    let phase = beta.atan();
    let failure = std::cell::RefCell::new(None);
    let outer = integrate_1d(
        |theta| {
            let inner = integrate_1d(
                |r: f64| {
                    let psi = theta - beta * r.ln();
                    let z = Complex64::from_polar(r, psi);
                    match ring.map.dilatation(z, psi - phase) {
                        Ok(d) => coeff * d / r,
                        Err(e) => {
                            failure.borrow_mut().get_or_insert(e);
                            f64::NAN
                        }
                    }
                },
                1.0,
                b,
                1e-12,
            );
            match inner {
                Ok(v) => 1.0 / v.value,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            }
        },
        0.0,
        TAU,
        1e-11,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let outer = outer?;
    Ok(ModuleEstimate::new(
        outer.value,
        Method::Quadrature,
        outer.abs_error_estimate,
        2.0,
    ))
}

/// Closed-form quantities for the slanted parallelogram with unit base:
/// the module of the slanted-interval family, the product identity, and
/// the bound on how far the full separating module can drift.
#[derive(Debug, Clone, Copy)]
pub struct ParallelogramBounds {
    pub slant_module: f64,
    pub product: f64,
    pub sigma_bound: f64,
}

pub fn parallelogram_bounds(theta: f64, h: f64) -> Result<ParallelogramBounds> {
    if !(theta > 0.0 && theta <= std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain(format!(
            "theta must lie in (0, pi/2], got {theta}"
        )));
    }
    if !(h > 0.0) {
        return Err(Error::Domain(format!("h must be positive, got {h}")));
    }
    let (sin, cos) = (theta.sin(), theta.cos());
    Ok(ParallelogramBounds {
        slant_module: sin / h,
        product: sin * sin,
        sigma_bound: h * cos * cos / sin,
    })
}

/// Convergence-rate bound eps^2 / b for the conformal module of the
/// sheared rectangle.
pub fn parallelogram_rate(eps: f64, b: f64) -> Result<f64> {
    if eps < 0.0 || !(b > 0.0) {
        return Err(Error::Domain(format!(
            "need eps >= 0 and b > 0, got eps = {eps}, b = {b}"
        )));
    }
    Ok(eps * eps / b)
}

/// Maximal real dilatation of the shear with angle theta.
pub fn shear_maximal_dilatation(theta: f64) -> f64 {
    let cot = theta.cos() / theta.sin();
    1.0 + 0.5 * cot * cot + 0.5 * cot * (4.0 + cot * cot).sqrt()
}

/// Named planar test maps with analytic complex dilatations.
///
/// * `identity`
/// * `scale` (c)               — z -> c z
/// * `shear` (theta)           — (x, t) -> (x + t cot(theta), t)
/// * `log-spiral` (beta)       — z -> z e^{-i beta log |z|}
/// * `radial-stretch` (kappa)  — z -> z |z|^{kappa - 1}
/// * `angular-shear` (c)       — z -> z e^{i c (|z| - 1)}
pub fn planar_map(name: &str, params: &[(&str, f64)]) -> Result<PlanarMap> {
    let get = |key: &str| -> Result<f64> {
        params
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| Error::MissingParameter(key.to_string()))
    };
    match name {
        "identity" => Ok(PlanarMap::new("identity", |z| z).with_mu(|_| Complex64::new(0.0, 0.0))),
        "scale" => {
            let c = get("c")?;
            Ok(PlanarMap::new("scale", move |z| c * z).with_mu(|_| Complex64::new(0.0, 0.0)))
        }
        "shear" => {
            let theta = get("theta")?;
            let cot = theta.cos() / theta.sin();
            Ok(
                PlanarMap::new("shear", move |z| Complex64::new(z.re + z.im * cot, z.im))
                    .with_mu(move |_| {
                        Complex64::new(0.0, cot / 2.0) / Complex64::new(1.0, -cot / 2.0)
                    }),
            )
        }
        "log-spiral" => {
            let beta = get("beta")?;
            Ok(PlanarMap::new("log-spiral", move |z| {
                let r = z.norm();
                if r == 0.0 {
                    z
                } else {
                    z * Complex64::from_polar(1.0, -beta * r.ln())
                }
            })
            .with_mu(move |z| {
                let phase = Complex64::from_polar(1.0, 2.0 * z.arg());
                phase * Complex64::new(0.0, -beta) / Complex64::new(2.0, -beta)
            }))
        }
        "radial-stretch" => {
            let kappa = get("kappa")?;
            Ok(PlanarMap::new("radial-stretch", move |z| {
                let r = z.norm();
                if r == 0.0 {
                    z
                } else {
                    z * r.powf(kappa - 1.0)
                }
            })
            .with_mu(move |z| {
                Complex64::from_polar(1.0, 2.0 * z.arg()) * ((kappa - 1.0) / (kappa + 1.0))
            }))
        }
        "angular-shear" => {
            let c = get("c")?;
            Ok(PlanarMap::new("angular-shear", move |z| {
                let r = z.norm();
                z * Complex64::from_polar(1.0, c * (r - 1.0))
            })
            .with_mu(move |z| {
                let r = z.norm();
                Complex64::from_polar(1.0, 2.0 * z.arg()) * Complex64::new(0.0, c * r)
                    / Complex64::new(2.0, c * r)
            }))
        }
        other => Err(Error::UnknownScenario(other.to_string())),
    }
}
