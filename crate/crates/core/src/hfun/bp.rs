//! Berkson–Porta form `G(z) = (b − z)(1 − b̄z) F(z)` with `Re F ≥ 0`: building
//! symbols in that form, sampling the Herglotz condition, and classifying a
//! given symbol as generating a global semiflow on the unit disc or not.

use std::f64::consts::PI;

use serde::Serialize;

use super::HoloExpr;
use crate::geometry::Domain;
use crate::semiflow;
use crate::{Error, Result, C64};

/// Sampled `Re F` may dip this far below zero and still count as Herglotz.
pub const TOL_HERGLOTZ: f64 = 1e-9;
pub const NEWTON_SEEDS: usize = 32;
pub const NEWTON_ITERS: usize = 50;
pub const NEWTON_TOL: f64 = 1e-12;
/// Radius of the probe circle used to evaluate `F` at its removable points.
pub const REMOVABLE_RADIUS: f64 = 1e-4;
/// Time budget for the escape witnesses.
pub const WITNESS_HORIZON: f64 = 50.0;
pub const WITNESS_TOL: f64 = 1e-9;

const BOUNDARY_SAMPLES: usize = 256;
const REMOVABLE_PROBES: usize = 16;

/// `(b − z)(1 − b̄z) F(z)`.
pub fn bp_build(b: C64, f: HoloExpr) -> Result<HoloExpr> {
    if !(b.norm() <= 1.0) {
        return Err(Error::BadParameter(format!("Denjoy–Wolff point must satisfy |b| <= 1, got |b| = {}", b.norm())));
    }
    let quadratic = HoloExpr::poly(vec![b, C64::new(-(1.0 + b.norm_sqr()), 0.0), b.conj()]);
    Ok(HoloExpr::product(quadratic, f))
}

/// Smallest sampled real part and where it occurs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HerglotzSample {
    pub min_re: f64,
    pub argmin: C64,
}

/// Minimum of `Re F` over `sample_grid(UnitDisc, density)`.
///
/// A negative minimum is a conclusive failure; a nonnegative one is only
/// evidence, since the grid is finite.
pub fn herglotz_check(f: &HoloExpr, density: usize) -> Result<HerglotzSample> {
    herglotz_check_on(f, &Domain::unit_disc(), density)
}

/// As [`herglotz_check`] on the grid of an arbitrary domain.
pub fn herglotz_check_on(f: &HoloExpr, domain: &Domain, density: usize) -> Result<HerglotzSample> {
    min_real_part(&domain.sample_grid(density), |z| f.eval(z))
}

fn min_real_part(grid: &[C64], mut eval: impl FnMut(C64) -> Result<C64>) -> Result<HerglotzSample> {
    let mut best = HerglotzSample { min_re: f64::INFINITY, argmin: C64::new(0.0, 0.0) };
    for &z in grid {
        let re = eval(z)?.re;
        if re < best.min_re || re.is_nan() {
            best = HerglotzSample { min_re: re, argmin: z };
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BpStatus {
    Global,
    NotGlobal,
    Inconclusive,
}

/// A start point whose trajectory left the unit disc, and when.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EscapeWitness {
    pub point: C64,
    pub time: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BpVerdict {
    pub status: BpStatus,
    /// Denjoy–Wolff candidate. For `Global` this is the point of the form.
    pub b: Option<C64>,
    /// Smallest sampled `Re F` of the best factorization tried.
    pub min_re_f: Option<f64>,
    pub witness: Option<EscapeWitness>,
}

/// `F(z) = G(z) / ((b − z)(1 − b̄z))`, averaged over a small circle at the
/// removable points `z = b` and `z = 1/b̄`.
fn factor_value(g: &HoloExpr, b: C64, z: C64) -> Result<C64> {
    let near_b = (z - b).norm() < 2.0 * REMOVABLE_RADIUS;
    let near_reflection = b.norm() > 0.0 && (z - 1.0 / b.conj()).norm() < 2.0 * REMOVABLE_RADIUS;
    if near_b || near_reflection {
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..REMOVABLE_PROBES {
            let w = z + C64::from_polar(REMOVABLE_RADIUS, 2.0 * PI * k as f64 / REMOVABLE_PROBES as f64);
            acc += g.eval(w)? / ((b - w) * (1.0 - b.conj() * w));
        }
        return Ok(acc / REMOVABLE_PROBES as f64);
    }
    Ok(g.eval(z)? / ((b - z) * (1.0 - b.conj() * z)))
}

fn newton(g: &HoloExpr, dg: &HoloExpr, mut z: C64) -> Option<C64> {
    for _ in 0..NEWTON_ITERS {
        let gz = g.eval(z).ok()?;
        if gz == C64::new(0.0, 0.0) {
            return Some(z);
        }
        let dz = dg.eval(z).ok()?;
        if !(dz.norm() > 0.0) {
            return None;
        }
        let step = gz / dz;
        z -= step;
        if !z.is_finite() {
            return None;
        }
        if step.norm() <= NEWTON_TOL * z.norm().max(1.0) {
            return Some(z);
        }
    }
    None
}

fn newton_seeds(grid: &[C64]) -> Vec<C64> {
    let interior = NEWTON_SEEDS - 8;
    let mut seeds: Vec<C64> = (0..interior).map(|k| grid[k * grid.len() / interior]).collect();
    seeds.extend((0..8).map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / 8.0)));
    seeds
}

fn arg_key(z: C64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// Zeros of `G` in the closed unit disc (up to `tol_b`), deterministic order:
/// smallest modulus first, then smallest argument in `[0, 2π)`.
pub fn zero_candidates(g: &HoloExpr, density: usize, tol_b: f64) -> Vec<C64> {
    let grid = Domain::unit_disc().sample_grid(density);
    let dg = g.derivative();
    let mut found: Vec<C64> = Vec::new();
    for seed in newton_seeds(&grid) {
        if let Some(z) = newton(g, &dg, seed) {
            if z.norm() <= 1.0 + tol_b && !found.iter().any(|w| (w - z).norm() < 1e-6) {
                found.push(z);
            }
        }
    }
    found.sort_by(|a, b| {
        a.norm()
            .partial_cmp(&b.norm())
            .unwrap()
            .then(arg_key(*a).partial_cmp(&arg_key(*b)).unwrap())
    });
    found
}

fn boundary_minimum(g: &HoloExpr) -> Option<C64> {
    let mut best: Option<(f64, C64)> = None;
    for k in 0..BOUNDARY_SAMPLES {
        let w = C64::from_polar(1.0, 2.0 * PI * k as f64 / BOUNDARY_SAMPLES as f64);
        if let Ok(v) = g.eval(w) {
            let m = v.norm();
            if m.is_finite() && best.map_or(true, |(bm, _)| m < bm) {
                best = Some((m, w));
            }
        }
    }
    best.map(|(_, w)| w)
}

/// Decides whether `G` generates a global semiflow on the unit disc.
///
/// Zeros of `G` in the closed disc are located by Newton iteration and each
/// is tried as the point `b` of the Berkson–Porta form; a zero-free `G` is
/// tried at the boundary point where `|G|` is smallest. A candidate whose
/// quotient `F` passes [`herglotz_check`] (within [`TOL_HERGLOTZ`]) gives
/// `Global`. Otherwise trajectories from 8 grid seeds are integrated and an
/// escape gives `NotGlobal`; with no escape the verdict is `Inconclusive`.
pub fn bp_classify(g: &HoloExpr, density: usize, tol_b: f64) -> Result<BpVerdict> {
    let disc = Domain::unit_disc();
    let grid = disc.sample_grid(density);

    let mut identically_zero = true;
    for &z in &grid {
        if g.eval(z)? != C64::new(0.0, 0.0) {
            identically_zero = false;
            break;
        }
    }
    if identically_zero {
        return Ok(BpVerdict { status: BpStatus::Global, b: Some(C64::new(0.0, 0.0)), min_re_f: Some(0.0), witness: None });
    }

    let mut candidates = zero_candidates(g, density, tol_b);
    if candidates.is_empty() {
        match boundary_minimum(g) {
            Some(w) => candidates.push(w),
            None => return Err(Error::Tolerance(format!("no zero of {g} found and G cannot be sampled on the unit circle"))),
        }
    }

    let mut best: Option<(C64, f64)> = None;
    for &b in &candidates {
        let sample = min_real_part(&grid, |z| factor_value(g, b, z))?;
        if sample.min_re >= -TOL_HERGLOTZ {
            return Ok(BpVerdict { status: BpStatus::Global, b: Some(b), min_re_f: Some(sample.min_re), witness: None });
        }
        if best.map_or(true, |(_, m)| sample.min_re > m) {
            best = Some((b, sample.min_re));
        }
    }

    let per_ring = 8 * density.max(1);
    let step = per_ring / 8;
    let witness = (0..8)
        .map(|k| grid[1 + k * step])
        .find_map(|seed| match semiflow::escape_time(g, &disc, seed, WITNESS_HORIZON, WITNESS_TOL) {
            Ok(Some(t)) => Some(EscapeWitness { point: seed, time: t }),
            _ => None,
        });

    let status = if witness.is_some() { BpStatus::NotGlobal } else { BpStatus::Inconclusive };
    Ok(BpVerdict { status, b: best.map(|x| x.0), min_re_f: best.map(|x| x.1), witness })
}
