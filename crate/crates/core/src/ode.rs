//! Embedded Runge-Kutta integration (Dormand-Prince 5(4)).

use crate::error::{Error, Result};

/// Tolerances and step controls.
#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-11, atol: 1e-13, h_init: 1e-3, h_min: 1e-14, max_steps: 5_000_000 }
    }
}

impl OdeOptions {
    pub fn with_tol(tol: f64) -> Self {
        OdeOptions { rtol: tol, atol: tol * 1e-2, ..Default::default() }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// difference between 5th and embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy(out: &mut [f64], y: &[f64], h: f64, terms: &[(f64, &[f64])]) {
    for i in 0..y.len() {
        let mut s = 0.0;
        for (c, k) in terms {
            s += c * k[i];
        }
        out[i] = y[i] + h * s;
    }
}

/// Integrates `y' = f(t, y)` from `t0`, stopping exactly at every entry of
/// `outputs` (which must be sorted away from `t0`). After each accepted step
/// `project` may correct the state (for example back onto a Lie group).
/// Returns the states at the output times.
pub fn integrate<F, P>(
    f: F,
    t0: f64,
    y0: &[f64],
    outputs: &[f64],
    opts: &OdeOptions,
    mut project: P,
) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64, &[f64], &mut [f64]),
    P: FnMut(&mut [f64]),
{
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut t = t0;
    let mut res = Vec::with_capacity(outputs.len());
    if outputs.is_empty() {
        return Ok(res);
    }
    let dir = if outputs[outputs.len() - 1] >= t0 { 1.0 } else { -1.0 };
    let mut h = opts.h_init.abs() * dir;
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut ytmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];
    f(t, &y, &mut k1);
    let mut steps = 0usize;
    for &target in outputs {
        while (target - t) * dir > 0.0 {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::Numeric("step budget exhausted".into()));
            }
            let mut last = false;
            if (t + h - target) * dir >= 0.0 {
                h = target - t;
                last = true;
            }
            axpy(&mut ytmp, &y, h, &[(A21, &k1)]);
            f(t + C2 * h, &ytmp, &mut k2);
            axpy(&mut ytmp, &y, h, &[(A31, &k1), (A32, &k2)]);
            f(t + C3 * h, &ytmp, &mut k3);
            axpy(&mut ytmp, &y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
            f(t + C4 * h, &ytmp, &mut k4);
            axpy(&mut ytmp, &y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
            f(t + C5 * h, &ytmp, &mut k5);
            axpy(&mut ytmp, &y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
            f(t + h, &ytmp, &mut k6);
            axpy(&mut ynew, &y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            f(t + h, &ynew, &mut k7);
            let mut err = 0.0f64;
            for i in 0..n {
                let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = opts.atol + opts.rtol * y[i].abs().max(ynew[i].abs());
                err = err.max((e / sc).abs());
            }
            if err <= 1.0 || h.abs() <= opts.h_min {
                t = if last { target } else { t + h };
                std::mem::swap(&mut y, &mut ynew);
                project(&mut y);
                f(t, &y, &mut k1);
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if !last {
                    h *= fac;
                }
            } else {
                let fac = (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
                h *= fac;
                if h.abs() < opts.h_min {
                    return Err(Error::Numeric(format!("step size underflow at t = {t}")));
                }
            }
            if !h.is_finite() {
                return Err(Error::Numeric(format!("non-finite step at t = {t}")));
            }
        }
        res.push(y.clone());
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let f = |_t: f64, y: &[f64], d: &mut [f64]| {
            d[0] = y[1];
            d[1] = -y[0];
        };
        let out = integrate(f, 0.0, &[1.0, 0.0], &[1.0, 10.0], &OdeOptions::default(), |_| {}).unwrap();
        assert!((out[0][0] - 1f64.cos()).abs() < 1e-9);
        assert!((out[1][0] - 10f64.cos()).abs() < 1e-9);
    }

    #[test]
    fn backwards() {
        let f = |_t: f64, y: &[f64], d: &mut [f64]| d[0] = y[0];
        let out = integrate(f, 0.0, &[1.0], &[-2.0], &OdeOptions::default(), |_| {}).unwrap();
        assert!((out[0][0] - (-2f64).exp()).abs() < 1e-10);
    }
}
