//! Finite differences and the small dense linear algebra the condenser
//! machinery needs (dimensions stay at n <= 4).

use crate::error::{Error, Result};

/// Default central-difference step: eps^{1/3} * max(1, |x|).
pub fn fd_step(x: f64) -> f64 {
    f64::EPSILON.cbrt() * x.abs().max(1.0)
}

/// Central-difference Jacobian of `map` at `x`, entrywise error O(h^2).
/// Rows index outputs, columns inputs. `h <= 0` selects the default step
/// per coordinate.
pub fn jacobian_fd<F: Fn(&[f64]) -> Vec<f64>>(map: F, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    let n = x.len();
    let m = map(x).len();
    let mut jac = vec![vec![0.0; n]; m];
    let mut xp = x.to_vec();
    let mut xm = x.to_vec();
    for j in 0..n {
        let step = if h > 0.0 { h } else { fd_step(x[j]) };
        xp[j] = x[j] + step;
        xm[j] = x[j] - step;
        let fp = map(&xp);
        let fm = map(&xm);
        // Actual spacing after rounding x +- step to floats.
        let denom = xp[j] - xm[j];
        for i in 0..m {
            jac[i][j] = (fp[i] - fm[i]) / denom;
        }
        xp[j] = x[j];
        xm[j] = x[j];
    }
    jac
}

/// Central-difference gradient of a scalar field.
pub fn gradient_fd<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], h: f64) -> Vec<f64> {
    let n = x.len();
    let mut grad = vec![0.0; n];
    let mut xp = x.to_vec();
    let mut xm = x.to_vec();
    for j in 0..n {
        let step = if h > 0.0 { h } else { fd_step(x[j]) };
        xp[j] = x[j] + step;
        xm[j] = x[j] - step;
        grad[j] = (f(&xp) - f(&xm)) / (xp[j] - xm[j]);
        xp[j] = x[j];
        xm[j] = x[j];
    }
    grad
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut d = 1.0;
    for k in 0..n {
        let (piv, _) = m
            .iter()
            .enumerate()
            .skip(k)
            .map(|(i, row)| (i, row[k].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if m[piv][k] == 0.0 {
            return 0.0;
        }
        if piv != k {
            m.swap(piv, k);
            d = -d;
        }
        d *= m[k][k];
        for i in k + 1..n {
            let factor = m[i][k] / m[k][k];
            for j in k..n {
                m[i][j] -= factor * m[k][j];
            }
        }
    }
    d
}

/// Inverse of a small square matrix. Errors on (numerically) singular input.
pub fn invert(a: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut ext = row.clone();
            ext.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            ext
        })
        .collect();
    for k in 0..n {
        let (piv, mag) = m
            .iter()
            .enumerate()
            .skip(k)
            .map(|(i, row)| (i, row[k].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if mag < 1e-300 {
            return Err(Error::SingularJacobian(
                a.iter().flat_map(|r| r.iter().copied()).collect(),
            ));
        }
        m.swap(piv, k);
        let pivot = m[k][k];
        for j in 0..2 * n {
            m[k][j] /= pivot;
        }
        for i in 0..n {
            if i != k {
                let factor = m[i][k];
                if factor != 0.0 {
                    for j in 0..2 * n {
                        m[i][j] -= factor * m[k][j];
                    }
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[f64], c: f64) -> Vec<f64> {
    a.iter().map(|x| c * x).collect()
}

pub fn add_scaled(a: &[f64], b: &[f64], c: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + c * y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_jacobian() {
        let j = jacobian_fd(|x| x.to_vec(), &[0.3, -1.2], 0.0);
        assert!((j[0][0] - 1.0).abs() < 1e-10);
        assert!((j[1][1] - 1.0).abs() < 1e-10);
        assert!(j[0][1].abs() < 1e-10 && j[1][0].abs() < 1e-10);
    }

    #[test]
    fn shear_jacobian() {
        // f(x, t) = (x + t cot(theta), t) with theta = pi/4 gives rows
        // [1, 1] and [0, 1].
        let cot = 1.0;
        let j = jacobian_fd(|p| vec![p[0] + p[1] * cot, p[1]], &[0.4, 0.7], 0.0);
        let expect = [[1.0, 1.0], [0.0, 1.0]];
        for i in 0..2 {
            for k in 0..2 {
                assert!((j[i][k] - expect[i][k]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn squaring_map_jacobian_det() {
        // z -> z^2 at z = 1 has |f'|^2 = 4.
        let j = jacobian_fd(
            |p| vec![p[0] * p[0] - p[1] * p[1], 2.0 * p[0] * p[1]],
            &[1.0, 0.0],
            0.0,
        );
        assert!((det(&j) - 4.0).abs() < 1e-8);
    }

    #[test]
    fn affine_exactness() {
        let j = jacobian_fd(
            |p| vec![2.0 * p[0] - 3.0 * p[1] + 1.0, 0.5 * p[0] + 4.0 * p[1]],
            &[10.0, -7.0],
            0.0,
        );
        assert!((j[0][0] - 2.0).abs() < 1e-10);
        assert!((j[0][1] + 3.0).abs() < 1e-10);
        assert!((j[1][0] - 0.5).abs() < 1e-10);
        assert!((j[1][1] - 4.0).abs() < 1e-10);
    }

    #[test]
    fn inverse_of_3x3() {
        let a = vec![
            vec![2.0, 1.0, 0.0],
            vec![-1.0, 3.0, 2.0],
            vec![0.5, 0.0, 1.0],
        ];
        let inv = invert(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let v: f64 = (0..3).map(|k| a[i][k] * inv[k][j]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((v - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(invert(&a).is_err());
    }
}
