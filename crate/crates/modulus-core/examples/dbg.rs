use modulus_core::planar::*;
use modulus_core::numerics::quad::integrate_1d;
use num_complex::Complex64;
use std::f64::consts::TAU;
fn main() {
    let b: f64 = 2.0;
    let beta = 0.8;
    let inner = planar_map("angular-shear", &[("c", 0.6)]).unwrap();
    let composite = PlanarMap::new("composite", move |z| {
        let (x, t) = (z.re, z.im);
        let w = Complex64::from_polar(t, x - beta * t.ln());
        inner.eval(w)
    });
    let dt = (b - 1.0) * 1e-5;
    for x in [0.0, 1.0, 3.0, 6.28] {
        let ell = integrate_1d(
            |t| {
                let up = composite.eval(Complex64::new(x, t + dt));
                let dn = composite.eval(Complex64::new(x, t - dt));
                let cdot = (up - dn) / (2.0 * dt);
                let jf = composite.jacobian(Complex64::new(x, t));
                cdot.norm_sqr() / jf
            },
            1.0, b, 1e-10,
        );
        match ell {
            Ok(r) => println!("x={x}: ell={:.12} err={:.2e}", r.value, r.abs_error_estimate),
            Err(e) => println!("x={x}: ERR {e}"),
        }
        let jf0 = composite.jacobian(Complex64::new(x, 1.5));
        println!("   J at (x,1.5) = {jf0}");
    }
}
