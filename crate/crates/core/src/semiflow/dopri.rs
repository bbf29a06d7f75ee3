//! Dormand–Prince 5(4) step for autonomous complex systems `y' = f(y)`.

use crate::C64;

const C2: f64 = 1.0 / 5.0;
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
// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

pub(crate) struct Step {
    pub y: Vec<C64>,
    /// `f(y)`, reusable as the first stage of the next step.
    pub dy: Vec<C64>,
    /// Scaled error norm; the step is acceptable when `err <= 1`.
    pub err: f64,
}

fn combine(y: &[C64], h: f64, terms: &[(f64, &[C64])]) -> Vec<C64> {
    let mut out = y.to_vec();
    for (w, k) in terms {
        if *w == 0.0 {
            continue;
        }
        let hw = h * w;
        for (o, ki) in out.iter_mut().zip(k.iter()) {
            *o += ki * hw;
        }
    }
    out
}

/// One step of size `h` from `y` with `k1 = f(y)`.
///
/// The error is measured per component against `tol · (1 + |y|)`.
pub(crate) fn step<E>(
    f: &mut impl FnMut(&[C64]) -> Result<Vec<C64>, E>,
    y: &[C64],
    k1: &[C64],
    h: f64,
    tol: f64,
) -> Result<Step, E> {
    let k2 = f(&combine(y, h, &[(C2, k1)]))?;
    let k3 = f(&combine(y, h, &[(A31, k1), (A32, &k2)]))?;
    let k4 = f(&combine(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]))?;
    let k5 = f(&combine(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
    let k6 = f(&combine(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]))?;
    let y5 = combine(y, h, &[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
    let k7 = f(&y5)?;
    let mut err: f64 = 0.0;
    for i in 0..y.len() {
        let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
        let scale = tol * (1.0 + y[i].norm().max(y5[i].norm()));
        err = err.max(e.norm() / scale);
    }
    if !err.is_finite() {
        err = f64::INFINITY;
    }
    Ok(Step { y: y5, dy: k7, err })
}

/// Step-size factor from an error norm, clamped to `[0.2, 5]`.
pub(crate) fn controller(err: f64) -> f64 {
    if err == 0.0 {
        5.0
    } else {
        (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
    }
}
