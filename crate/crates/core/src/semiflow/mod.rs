//! The semiflow generated by a symbol: `u' = G(u)`, `u(0) = z`.
//!
//! Pointwise trajectories are integrated with an adaptive Dormand–Prince 5(4)
//! scheme that never records a point outside the domain. A trajectory that
//! runs into the boundary shows up as step sizes collapsing next to the wall;
//! once the step underflows [`H_MIN`] within [`ESCAPE_DISTANCE`] of the
//! boundary the run ends as [`FlowStatus::Escaped`], with the crossing time
//! refined by bisection on the final step. The same underflow far from the
//! boundary is reported as [`Error::Stiffness`].
//!
//! [`flow_series`] integrates the Taylor coefficients of `z ↦ φ(t, z)`
//! directly: the coefficient vector `c` solves `ċ = G ∘ c` in truncated
//! series arithmetic, starting from the identity series.

mod dopri;

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::geometry::Domain;
use crate::hfun::{symbol_series, HoloExpr, SeriesFn};
use crate::{fmt17, Error, Result, C64};

/// Proposed points closer than this to the boundary are rejected.
pub const DELTA_WALL: f64 = 1e-9;
/// Step underflow within this distance of the boundary counts as escape.
pub const ESCAPE_DISTANCE: f64 = 1e-6;
pub const H_MIN: f64 = 1e-12;
/// Magnitude treated as escape to infinity on unbounded domains.
pub const R_MAX: f64 = 1e8;
/// Smallest degree at which the flow coefficient system is integrated.
pub const MIN_WORK_DEGREE: usize = 32;
const MAX_ATTEMPTS: usize = 2_000_000;
const TOL_RANGE: (f64, f64) = (1e-13, 1e-3);

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FlowStatus {
    Completed { horizon: f64 },
    /// `exit_point` is the last recorded in-domain point.
    Escaped { t_escape: f64, exit_point: C64, at_infinity: bool },
    Failed { reason: String },
}

/// A computed path. Forward runs have increasing times starting at 0;
/// backward runs report times decreasing from 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<C64>,
    pub status: FlowStatus,
}

impl Trajectory {
    pub fn final_point(&self) -> C64 {
        *self.points.last().expect("trajectory always holds its initial point")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory always holds its initial time")
    }

    pub fn escape_time(&self) -> Option<f64> {
        match self.status {
            FlowStatus::Escaped { t_escape, .. } => Some(t_escape),
            _ => None,
        }
    }

    pub fn is_escaped(&self) -> bool {
        matches!(self.status, FlowStatus::Escaped { .. })
    }

    /// `t,re,im` rows with 17 significant digits and a trailing status comment.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,re,im\n");
        for (t, z) in self.times.iter().zip(&self.points) {
            let _ = writeln!(out, "{},{},{}", fmt17(*t), fmt17(z.re), fmt17(z.im));
        }
        let _ = match &self.status {
            FlowStatus::Completed { horizon } => writeln!(out, "# status=completed horizon={}", fmt17(*horizon)),
            FlowStatus::Escaped { t_escape, exit_point, at_infinity } => writeln!(
                out,
                "# status=escaped t_escape={} exit_re={} exit_im={} at_infinity={}",
                fmt17(*t_escape),
                fmt17(exit_point.re),
                fmt17(exit_point.im),
                at_infinity
            ),
            FlowStatus::Failed { reason } => writeln!(out, "# status=failed reason={reason}"),
        };
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

enum StageError {
    /// Stage point left the region where the symbol can be evaluated.
    Reject,
    Fatal(Error),
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol >= TOL_RANGE.0 && tol <= TOL_RANGE.1) {
        return Err(Error::BadParameter(format!("tol must lie in [1e-13, 1e-3], got {tol}")));
    }
    Ok(())
}

fn output_count(horizon: f64) -> usize {
    ((16.0 * horizon).ceil() as usize).max(64)
}

/// Integrates `u' = G(u)` from `z0` up to `horizon` inside `d`.
///
/// Records every accepted step plus `max(64, ⌈16·horizon⌉)` uniformly spaced
/// output times (steps are clipped to land on them).
pub fn integrate(g: &HoloExpr, d: &Domain, z0: C64, horizon: f64, tol: f64) -> Result<Trajectory> {
    run(g, d, z0, horizon, tol, 1.0)
}

/// Integrates the flow backwards in time, i.e. `u' = −G(u)`, reporting times
/// `0, −t_1, −t_2, …`.
pub fn backward_integrate(g: &HoloExpr, d: &Domain, z0: C64, horizon: f64, tol: f64) -> Result<Trajectory> {
    let mut traj = run(g, d, z0, horizon, tol, -1.0)?;
    for t in traj.times.iter_mut() {
        *t = -*t;
    }
    match &mut traj.status {
        FlowStatus::Completed { horizon } => *horizon = -*horizon,
        FlowStatus::Escaped { t_escape, .. } => *t_escape = -*t_escape,
        FlowStatus::Failed { .. } => {}
    }
    Ok(traj)
}

fn run(g: &HoloExpr, d: &Domain, z0: C64, horizon: f64, tol: f64, direction: f64) -> Result<Trajectory> {
    if !d.contains(z0) {
        return Err(Error::Domain { point: z0, domain: d.to_string() });
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::BadParameter(format!("horizon must be positive, got {horizon}")));
    }
    check_tol(tol)?;

    let mut rhs = |y: &[C64]| -> std::result::Result<Vec<C64>, StageError> {
        let u = y[0];
        if !u.is_finite() {
            return Err(StageError::Reject);
        }
        let near_wall = d.signed_distance(u) < DELTA_WALL;
        match g.eval(u) {
            Ok(v) if v.is_finite() => Ok(vec![v * direction]),
            Ok(_) if near_wall => Err(StageError::Reject),
            Ok(v) => Err(StageError::Fatal(Error::Tolerance(format!("symbol value {v} at {u} is not finite")))),
            Err(_) if near_wall => Err(StageError::Reject),
            Err(e) => Err(StageError::Fatal(e)),
        }
    };

    let n_out = output_count(horizon);
    let out_time = |k: usize| horizon * k as f64 / n_out as f64;
    let mut out_k = 1;

    let mut times = vec![0.0];
    let mut points = vec![z0];
    let mut t = 0.0;
    let mut u = z0;
    let mut k1 = match rhs(&[u]) {
        Ok(k) => k,
        Err(StageError::Fatal(e)) => return Err(e),
        Err(StageError::Reject) => {
            let status = FlowStatus::Escaped { t_escape: 0.0, exit_point: z0, at_infinity: false };
            return Ok(Trajectory { times, points, status });
        }
    };
    let speed = k1[0].norm();
    let mut h = if speed > 0.0 { (1e-2 * (1.0 + u.norm()) / speed).min(horizon) } else { horizon };

    for _ in 0..MAX_ATTEMPTS {
        let next_out = out_time(out_k);
        let clipped = h >= next_out - t;
        let h_try = if clipped { next_out - t } else { h };

        let accepted = match dopri::step(&mut rhs, &[u], &k1, h_try, tol) {
            Err(StageError::Fatal(e)) => return Err(e),
            Err(StageError::Reject) => {
                h = h_try / 2.0;
                None
            }
            Ok(s) => {
                let v = s.y[0];
                if !(d.signed_distance(v) >= DELTA_WALL) {
                    h = h_try / 2.0;
                    None
                } else if s.err > 1.0 {
                    h = h_try * dopri::controller(s.err);
                    None
                } else {
                    Some(s)
                }
            }
        };

        match accepted {
            Some(s) => {
                let fac = dopri::controller(s.err);
                t = if clipped { next_out } else { t + h_try };
                u = s.y[0];
                k1 = s.dy;
                times.push(t);
                points.push(u);
                if !clipped {
                    h = h_try * fac;
                }
                if u.norm() > R_MAX {
                    let status = FlowStatus::Escaped { t_escape: t, exit_point: u, at_infinity: true };
                    return Ok(Trajectory { times, points, status });
                }
                if clipped {
                    out_k += 1;
                    if out_k > n_out {
                        return Ok(Trajectory { times, points, status: FlowStatus::Completed { horizon } });
                    }
                }
            }
            None if h < H_MIN => {
                let distance = d.signed_distance(u);
                if distance < ESCAPE_DISTANCE {
                    let extra = refine_escape(&mut rhs, d, u, &k1, tol);
                    let status = FlowStatus::Escaped { t_escape: t + extra, exit_point: u, at_infinity: false };
                    return Ok(Trajectory { times, points, status });
                }
                return Err(Error::Stiffness { t: t * direction, distance });
            }
            None => {}
        }
    }
    let reason = format!("step budget of {MAX_ATTEMPTS} attempts exhausted at t = {t}");
    Ok(Trajectory { times, points, status: FlowStatus::Failed { reason } })
}

/// Time from `u` until a single step first lands outside `d`, bisected to
/// within [`H_MIN`].
fn refine_escape(
    rhs: &mut impl FnMut(&[C64]) -> std::result::Result<Vec<C64>, StageError>,
    d: &Domain,
    u: C64,
    k1: &[C64],
    tol: f64,
) -> f64 {
    let mut inside = |h: f64| match dopri::step(rhs, &[u], k1, h, tol) {
        Ok(s) => d.signed_distance(s.y[0]) > 0.0,
        Err(_) => false,
    };
    let speed = k1[0].norm().max(f64::MIN_POSITIVE);
    let mut hi = (2.0 * d.signed_distance(u).max(0.0) / speed).max(H_MIN);
    let mut doublings = 0;
    while inside(hi) {
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return 0.0;
        }
    }
    let mut lo = 0.0;
    while hi - lo > H_MIN {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `φ(t, z0)`; an escape before `t` is an error.
pub fn flow_map(g: &HoloExpr, d: &Domain, z0: C64, t: f64, tol: f64) -> Result<C64> {
    if t == 0.0 {
        if !d.contains(z0) {
            return Err(Error::Domain { point: z0, domain: d.to_string() });
        }
        return Ok(z0);
    }
    let traj = integrate(g, d, z0, t, tol)?;
    match traj.status {
        FlowStatus::Completed { .. } => Ok(traj.final_point()),
        FlowStatus::Escaped { t_escape, exit_point, .. } => Err(Error::Escape { t: t_escape, point: exit_point }),
        FlowStatus::Failed { reason } => Err(Error::Tolerance(reason)),
    }
}

/// Escape time of the trajectory from `z0` if it leaves `d` by `t_max`.
/// `None` only means no escape was observed.
pub fn escape_time(g: &HoloExpr, d: &Domain, z0: C64, t_max: f64, tol: f64) -> Result<Option<f64>> {
    let traj = integrate(g, d, z0, t_max, tol)?;
    Ok(traj.escape_time().filter(|t| *t <= t_max))
}

/// `|φ(t + s, z0) − φ(t, φ(s, z0))|`.
pub fn semigroup_residual(g: &HoloExpr, d: &Domain, z0: C64, t: f64, s: f64, tol: f64) -> Result<f64> {
    let direct = flow_map(g, d, z0, t + s, tol)?;
    let mid = flow_map(g, d, z0, s, tol)?;
    let composed = flow_map(g, d, mid, t, tol)?;
    Ok((direct - composed).norm())
}

/// Taylor coefficients of `z ↦ φ(t, z)` about 0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowSeries {
    pub t: f64,
    pub coeffs: SeriesFn,
}

/// Flow map of `G` at time `t` as a degree-`n` series.
///
/// Fails with [`Error::Escape`] when the trajectory from 0 or from one of 8
/// probes on `|z| = 0.25` leaves the unit disc before `t`.
pub fn flow_series(g: &HoloExpr, t: f64, n: usize, tol: f64) -> Result<FlowSeries> {
    Ok(flow_series_at(g, &[t], n, tol)?.remove(0))
}

/// Flow series at several nondecreasing times from a single integration.
pub fn flow_series_at(g: &HoloExpr, times: &[f64], n: usize, tol: f64) -> Result<Vec<FlowSeries>> {
    check_tol(tol)?;
    let mut last = 0.0;
    for &t in times {
        if !(t >= last && t.is_finite()) {
            return Err(Error::BadParameter(format!("flow times must be finite, nonnegative and sorted, got {t}")));
        }
        last = t;
    }
    if last > 0.0 {
        let disc = Domain::unit_disc();
        let probes = std::iter::once(C64::new(0.0, 0.0))
            .chain((0..8).map(|k| C64::from_polar(0.25, std::f64::consts::PI * k as f64 / 4.0)));
        for z in probes {
            let traj = integrate(g, &disc, z, last, tol)?;
            if let FlowStatus::Escaped { t_escape, exit_point, .. } = traj.status {
                return Err(Error::Escape { t: t_escape, point: exit_point });
            }
        }
    }

    // The coefficient system is closed only for the symbol's full series, so
    // low-degree requests are integrated at a working degree and truncated.
    let work = n.max(MIN_WORK_DEGREE);
    let gs = symbol_series(g, work)?;
    let mut rhs = |y: &[C64]| -> Result<Vec<C64>> {
        let c = SeriesFn::new(y.to_vec());
        Ok(gs.compose(&c)?.into_coeffs())
    };
    let y0 = SeriesFn::identity(work).into_coeffs();
    let states = integrate_vector(&mut rhs, y0, times, tol)?;
    Ok(times
        .iter()
        .zip(states)
        .map(|(&t, y)| FlowSeries { t, coeffs: SeriesFn::new(y).with_degree(n) })
        .collect())
}

/// Adaptive integration of an autonomous vector system, returning the state at
/// each of the sorted `stops`.
fn integrate_vector(
    rhs: &mut impl FnMut(&[C64]) -> Result<Vec<C64>>,
    y0: Vec<C64>,
    stops: &[f64],
    tol: f64,
) -> Result<Vec<Vec<C64>>> {
    let mut out = Vec::with_capacity(stops.len());
    let mut t = 0.0;
    let mut y = y0;
    let mut k1 = rhs(&y)?;
    let mut h: f64 = 1e-2;
    let mut attempts = 0usize;
    for &stop in stops {
        while t < stop {
            attempts += 1;
            if attempts > MAX_ATTEMPTS {
                return Err(Error::Tolerance(format!("series integration exhausted its step budget at t = {t}")));
            }
            let clipped = h >= stop - t;
            let h_try = if clipped { stop - t } else { h };
            let s = dopri::step(rhs, &y, &k1, h_try, tol)?;
            if s.err > 1.0 {
                h = h_try * dopri::controller(s.err);
                if h < H_MIN {
                    return Err(Error::Tolerance(format!("series step size underflow at t = {t}")));
                }
                continue;
            }
            t = if clipped { stop } else { t + h_try };
            if !clipped {
                h = h_try * dopri::controller(s.err);
            }
            y = s.y;
            k1 = s.dy;
        }
        out.push(y.clone());
    }
    Ok(out)
}
