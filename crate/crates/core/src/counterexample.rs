//! A symbol whose flow is global on the disc of radius 2 but leaves the unit
//! disc.
//!
//! For `1 < |b| < 2` and `F` with `Re F ≥ 0` on `|z| < 2`,
//!
//! ```text
//! G̃(z) = (b − z)(1 − b̄z/4) F(z)
//! ```
//!
//! is the Berkson–Porta form on the disc of radius 2 (the disc form rescaled by
//! `z ↦ z/2`). Its flow is global there and tends to `b`, so trajectories
//! starting in the unit disc cross `|z| = 1`. Restricting functions on the big
//! disc to `𝔻` therefore gives a semigroup that is not made of composition
//! operators on `𝔻`.
//!
//! The unscaled product `(b̄z − 1)(z − b)F` is the unit-disc form instead: it
//! vanishes at `1/b̄ ∈ 𝔻`, which attracts every orbit in `𝔻`, so that product
//! does not exhibit the crossing.

use serde::Serialize;

use crate::geometry::Domain;
use crate::hfun::{herglotz_check_on, HoloExpr, TOL_HERGLOTZ};
use crate::semiflow::{flow_map, integrate, FlowStatus, Trajectory};
use crate::{Error, Result, C64};

pub const BIG_RADIUS: f64 = 2.0;
pub const DEFAULT_B: f64 = 1.5;
pub const DEFAULT_T_LONG: f64 = 20.0;
pub const DW_TOL: f64 = 1e-3;
/// Width of the final bracket around the unit-circle crossing time.
pub const CROSSING_TOL: f64 = 1e-10;
const HERGLOTZ_DENSITY: usize = 2;

pub fn big_disc() -> Domain {
    Domain::Disc { center: C64::new(0.0, 0.0), radius: BIG_RADIUS }
}

/// `G̃(z) = (b − z)(1 − b̄z/4) F(z)`; requires `1 < |b| < 2` and `Re F ≥ 0`
/// on the sampled big disc.
pub fn build_counterexample(b: C64, f: HoloExpr) -> Result<HoloExpr> {
    if !(b.norm() > 1.0 && b.norm() < BIG_RADIUS) {
        return Err(Error::BadParameter(format!("need 1 < |b| < 2, got |b| = {}", b.norm())));
    }
    let sample = herglotz_check_on(&f, &big_disc(), HERGLOTZ_DENSITY)?;
    if sample.min_re < -TOL_HERGLOTZ || sample.min_re.is_nan() {
        return Err(Error::Herglotz { min_re: sample.min_re, at: sample.argmin });
    }
    let r2 = BIG_RADIUS * BIG_RADIUS;
    let form = HoloExpr::poly(vec![b, C64::new(-(1.0 + b.norm_sqr() / r2), 0.0), b.conj() / r2]);
    Ok(HoloExpr::product(form, f))
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub b: C64,
    pub f_desc: String,
    pub z0: C64,
    /// First time with `|φ(t, z0)| ≥ 1`.
    pub t_exit: Option<f64>,
    pub exit_point: Option<C64>,
    /// `|φ(T_long, z0) − b|`.
    pub dw_distance: f64,
    pub t_long: f64,
    pub final_point: C64,
    /// Largest `|φ|` over the recorded samples; below 2 for every report.
    pub max_modulus: f64,
    pub warning: Option<String>,
    pub trajectory_path: Option<String>,
    #[serde(skip)]
    pub trajectory: Trajectory,
}

impl CounterexampleReport {
    pub fn converged(&self, dw_tol: f64) -> bool {
        self.dw_distance < dw_tol
    }
}

/// Flows `G̃` from `z0 ∈ 𝔻` on the big disc up to `t_long` and locates the
/// first crossing of the unit circle.
pub fn run_counterexample(b: C64, f: HoloExpr, z0: C64, t_long: f64, tol: f64) -> Result<CounterexampleReport> {
    let disc = Domain::unit_disc();
    if !disc.contains(z0) {
        return Err(Error::Domain { point: z0, domain: disc.to_string() });
    }
    if !(t_long > 0.0 && t_long.is_finite()) {
        return Err(Error::BadParameter(format!("horizon must be positive, got {t_long}")));
    }
    let f_desc = f.to_string();
    let g = build_counterexample(b, f)?;
    let big = big_disc();
    let trajectory = integrate(&g, &big, z0, t_long, tol)?;
    match &trajectory.status {
        FlowStatus::Completed { .. } => {}
        FlowStatus::Escaped { t_escape, exit_point, .. } => {
            return Err(Error::Escape { t: *t_escape, point: *exit_point });
        }
        FlowStatus::Failed { reason } => return Err(Error::Tolerance(reason.clone())),
    }

    let (t_exit, exit_point, warning) = match trajectory.points.iter().position(|z| z.norm() >= 1.0) {
        Some(i) => {
            let (t, z) = refine_crossing(&g, &big, trajectory.times[i - 1], trajectory.points[i - 1], trajectory.times[i], tol)?;
            (Some(t), Some(z), None)
        }
        None => (None, None, Some(format!("no crossing of |z| = 1 before t = {t_long}"))),
    };
    let final_point = trajectory.final_point();
    Ok(CounterexampleReport {
        b,
        f_desc,
        z0,
        t_exit,
        exit_point,
        dw_distance: (final_point - b).norm(),
        t_long,
        final_point,
        max_modulus: trajectory.points.iter().map(|z| z.norm()).fold(0.0, f64::max),
        warning,
        trajectory_path: None,
        trajectory,
    })
}

/// Bisection on the step size from the last sample inside `𝔻`.
fn refine_crossing(g: &HoloExpr, big: &Domain, t0: f64, z_in: C64, t1: f64, tol: f64) -> Result<(f64, C64)> {
    let mut lo = 0.0;
    let mut hi = t1 - t0;
    let mut z_hi = flow_map(g, big, z_in, hi, tol)?;
    while hi - lo > CROSSING_TOL {
        let mid = 0.5 * (lo + hi);
        let z = flow_map(g, big, z_in, mid, tol)?;
        if z.norm() >= 1.0 {
            hi = mid;
            z_hi = z;
        } else {
            lo = mid;
        }
    }
    Ok((t0 + 0.5 * (lo + hi), z_hi))
}
