//! Planar domains: open discs and half-planes.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result, C64};

/// Which half-plane: `Re z > 0` or `Im z > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfPlaneKind {
    Right,
    Upper,
}

/// An open planar domain. The unit disc is stored as `Disc { 0, 1 }`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain {
    Disc { center: C64, radius: f64 },
    HalfPlane(HalfPlaneKind),
}

/// Lattice spacing of half-plane grids at density 1.
pub const HALF_PLANE_SPACING: f64 = 0.5;
/// Extent of half-plane grids at density 1; grows linearly with density.
pub const HALF_PLANE_EXTENT: f64 = 2.0;

impl Domain {
    pub fn unit_disc() -> Self {
        Domain::Disc { center: C64::new(0.0, 0.0), radius: 1.0 }
    }

    pub fn disc(center: C64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() || !center.is_finite() {
            return Err(Error::BadParameter(format!("disc radius must be positive, got {radius}")));
        }
        Ok(Domain::Disc { center, radius })
    }

    pub fn upper_half_plane() -> Self {
        Domain::HalfPlane(HalfPlaneKind::Upper)
    }

    pub fn right_half_plane() -> Self {
        Domain::HalfPlane(HalfPlaneKind::Right)
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, Domain::Disc { .. })
    }

    pub fn contains(&self, z: C64) -> bool {
        if !z.is_finite() {
            return false;
        }
        match *self {
            Domain::Disc { center, radius } => (z - center).norm() < radius,
            Domain::HalfPlane(HalfPlaneKind::Right) => z.re > 0.0,
            Domain::HalfPlane(HalfPlaneKind::Upper) => z.im > 0.0,
        }
    }

    /// Signed distance to the boundary: positive inside, negative outside.
    pub(crate) fn signed_distance(&self, z: C64) -> f64 {
        match *self {
            Domain::Disc { center, radius } => radius - (z - center).norm(),
            Domain::HalfPlane(HalfPlaneKind::Right) => z.re,
            Domain::HalfPlane(HalfPlaneKind::Upper) => z.im,
        }
    }

    /// Euclidean distance from an interior point to the boundary.
    pub fn boundary_distance(&self, z: C64) -> Result<f64> {
        if !self.contains(z) {
            return Err(Error::Domain { point: z, domain: self.to_string() });
        }
        Ok(self.signed_distance(z))
    }

    /// Deterministic interior sample points.
    ///
    /// Discs get the center plus `4·density` concentric rings at radii
    /// `R(1 − 2^{−j})`, each carrying `8·density` equispaced angles starting at
    /// angle 0. Half-planes get a rectangular lattice of spacing
    /// `HALF_PLANE_SPACING / density` reaching depth `HALF_PLANE_EXTENT · density`.
    pub fn sample_grid(&self, density: usize) -> Vec<C64> {
        let density = density.max(1);
        match *self {
            Domain::Disc { center, radius } => unit_disc_pattern(density)
                .into_iter()
                .map(|p| center + p * radius)
                .collect(),
            Domain::HalfPlane(kind) => {
                let step = HALF_PLANE_SPACING / density as f64;
                let extent = HALF_PLANE_EXTENT * density as f64;
                let depth_count = (extent / step).round() as i64;
                let mut out = Vec::with_capacity((depth_count * (2 * depth_count + 1)) as usize);
                for i in 1..=depth_count {
                    for j in -depth_count..=depth_count {
                        let normal = i as f64 * step;
                        let along = j as f64 * step;
                        out.push(match kind {
                            HalfPlaneKind::Right => C64::new(normal, along),
                            HalfPlaneKind::Upper => C64::new(along, normal),
                        });
                    }
                }
                out
            }
        }
    }

    /// Bounding box `(min, max)` used for plotting.
    pub fn view_box(&self) -> (C64, C64) {
        match *self {
            Domain::Disc { center, radius } => {
                let r = 1.1 * radius;
                (center - C64::new(r, r), center + C64::new(r, r))
            }
            Domain::HalfPlane(kind) => {
                let e = HALF_PLANE_EXTENT * 1.1;
                match kind {
                    HalfPlaneKind::Right => (C64::new(-0.1 * e, -e), C64::new(e, e)),
                    HalfPlaneKind::Upper => (C64::new(-e, -0.1 * e), C64::new(e, e)),
                }
            }
        }
    }
}

fn unit_disc_pattern(density: usize) -> Vec<C64> {
    let rings = 4 * density;
    let per_ring = 8 * density;
    let mut out = Vec::with_capacity(1 + rings * per_ring);
    out.push(C64::new(0.0, 0.0));
    for j in 1..=rings {
        let r = 1.0 - 0.5f64.powi(j as i32);
        for k in 0..per_ring {
            let theta = 2.0 * PI * k as f64 / per_ring as f64;
            out.push(C64::from_polar(r, theta));
        }
    }
    out
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Domain::Disc { center, radius } if center == C64::new(0.0, 0.0) && radius == 1.0 => {
                write!(f, "unitdisc")
            }
            Domain::Disc { center, radius } => write!(f, "disc:{},{},{}", center.re, center.im, radius),
            Domain::HalfPlane(HalfPlaneKind::Right) => write!(f, "halfplane:right"),
            Domain::HalfPlane(HalfPlaneKind::Upper) => write!(f, "halfplane:upper"),
        }
    }
}

impl FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "unitdisc" => return Ok(Domain::unit_disc()),
            "halfplane:right" => return Ok(Domain::right_half_plane()),
            "halfplane:upper" => return Ok(Domain::upper_half_plane()),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("disc:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::parse(5, "expected disc:cx,cy,r"));
            }
            let mut vals = [0.0; 3];
            for (i, p) in parts.iter().enumerate() {
                vals[i] = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(5, format!("bad number '{p}' in disc")))?;
            }
            return Domain::disc(C64::new(vals[0], vals[1]), vals[2]);
        }
        Err(Error::parse(0, format!("unknown domain '{s}'")))
    }
}
