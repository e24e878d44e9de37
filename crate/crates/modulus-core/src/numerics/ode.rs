//! Adaptive Runge-Kutta integration with the Dormand-Prince 5(4)
//! embedded pair. Used for the radial flows, whose fields are smooth away
//! from the characteristic set; near it the step controller underflows and
//! the solver reports a singularity with the last accepted state.

use crate::error::{Error, Result};

/// A solved trajectory: parameter samples (strictly increasing) and the
/// state at each accepted step.
#[derive(Debug, Clone)]
pub struct OdeTrajectory {
    pub samples: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub tolerance: f64,
}

impl OdeTrajectory {
    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory is never empty")
    }
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate `dy/ds = field(s, y)` from `s0` to `s1` (s0 < s1) with
/// absolute and relative error control at `tol` per step.
pub fn solve_ode<F: Fn(f64, &[f64]) -> Vec<f64>>(
    field: F,
    y0: &[f64],
    s0: f64,
    s1: f64,
    tol: f64,
) -> Result<OdeTrajectory> {
    if !(s0 < s1) {
        return Err(Error::Domain(format!(
            "ode range must satisfy s0 < s1, got [{s0}, {s1}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain("ode tolerance must be positive".into()));
    }
    let atol = tol;
    let rtol = tol;
    let dim = y0.len();

    let mut s = s0;
    let mut y = y0.to_vec();
    let mut samples = vec![s0];
    let mut states = vec![y.clone()];

    let mut h = (s1 - s0) * 1e-3;
    let h_min = (s1 - s0) * 1e-14;

    let mut k: Vec<Vec<f64>> = vec![vec![0.0; dim]; 7];
    k[0] = field(s, &y);

    let singular = |s: f64, y: &[f64]| Error::OdeSingularity {
        s,
        last_state: y.to_vec(),
    };

    while s < s1 {
        if !h.is_finite() || h < h_min {
            return Err(singular(s, &y));
        }
        if s + h > s1 {
            h = s1 - s;
        }

        let mut stage_failed = false;
        for stage in 1..7 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate().take(stage) {
                let a = A[stage - 1][j];
                if a != 0.0 {
                    for d in 0..dim {
                        ys[d] += h * a * kj[d];
                    }
                }
            }
            let ks = field(s + C[stage] * h, &ys);
            if ks.iter().any(|v| !v.is_finite()) {
                stage_failed = true;
                break;
            }
            k[stage] = ks;
        }
        if stage_failed {
            // Retry the whole step closer to the current state.
            h *= 0.25;
            continue;
        }

        let mut y5 = y.clone();
        let mut err_sq = 0.0;
        for d in 0..dim {
            let mut inc5 = 0.0;
            let mut inc4 = 0.0;
            for j in 0..7 {
                inc5 += B5[j] * k[j][d];
                inc4 += B4[j] * k[j][d];
            }
            y5[d] += h * inc5;
            let scale = atol + rtol * y[d].abs().max(y5[d].abs());
            let e = h * (inc5 - inc4) / scale;
            err_sq += e * e;
        }
        let err = (err_sq / dim as f64).sqrt();

        if err <= 1.0 || !err.is_finite() {
            if !err.is_finite() || y5.iter().any(|v| !v.is_finite()) {
                return Err(singular(s, &y));
            }
            s += h;
            y = y5;
            samples.push(s);
            states.push(y.clone());
            k[0] = field(s, &y);
        }

        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
    }

    Ok(OdeTrajectory {
        samples,
        states,
        tolerance: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let tr = solve_ode(|_, y| vec![y[0]], &[1.0], 0.0, 1.0, 1e-11).unwrap();
        assert!((tr.final_state()[0] - 1.0f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn euclidean_radial_flow() {
        // y' = y / s from s = 1 doubles each coordinate by s = 2:
        // phi(s, x) = s x.
        let xi = [0.6, -0.8];
        let tr = solve_ode(|s, y| y.iter().map(|v| v / s).collect(), &xi, 1.0, 2.0, 1e-11).unwrap();
        let end = tr.final_state();
        assert!((end[0] - 1.2).abs() < 1e-9);
        assert!((end[1] + 1.6).abs() < 1e-9);
        // Norm grows linearly in s at every accepted step.
        for (s, y) in tr.samples.iter().zip(&tr.states) {
            let n = (y[0] * y[0] + y[1] * y[1]).sqrt();
            assert!((n - s).abs() < 1e-9);
        }
    }

    #[test]
    fn samples_strictly_increasing() {
        let tr = solve_ode(|s, y| vec![(s * y[0]).sin()], &[0.4], 0.0, 3.0, 1e-9).unwrap();
        for w in tr.samples.windows(2) {
            assert!(w[1] > w[0]);
        }
        assert_eq!(tr.samples.len(), tr.states.len());
    }

    #[test]
    fn singularity_detected() {
        // y' = -1/y hits y = 0 at s = 0.5 (y0 = 1); the controller must
        // give up rather than step across.
        let res = solve_ode(|_, y| vec![-1.0 / y[0]], &[1.0], 0.0, 1.0, 1e-10);
        match res {
            Err(Error::OdeSingularity { s, last_state }) => {
                assert!(s <= 0.5 + 1e-6);
                assert!(last_state[0].abs() < 0.2);
            }
            other => panic!("expected singularity, got {other:?}"),
        }
    }
}
