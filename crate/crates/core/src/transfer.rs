//! Moving symbols between conformally equivalent domains.
//!
//! With `h: source → target` conformal and `G` a symbol on the target,
//! `H = (G ∘ h) / h'` is a symbol on the source and `h ∘ φ_H(t) = φ_G(t) ∘ h`.
//! Only Möbius maps are supported; the built-in one is the Cayley map
//! `h(z) = i(1 + z)/(1 − z)` from the unit disc onto the upper half-plane.

use std::fmt;
use std::str::FromStr;

use crate::geometry::Domain;
use crate::hfun::HoloExpr;
use crate::semiflow::flow_map;
use crate::{Error, Result, C64};

/// Round-trip tolerance used when validating a pair.
pub const PAIR_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct ConformalPair {
    pub h: HoloExpr,
    pub h_inv: HoloExpr,
    pub source: Domain,
    pub target: Domain,
}

impl ConformalPair {
    /// `h(z) = (az + b)/(cz + d)` from `source` onto `target`, validated on
    /// sample grids of both domains.
    pub fn mobius(coeffs: [C64; 4], source: Domain, target: Domain) -> Result<Self> {
        let [a, b, c, d] = coeffs;
        let h = HoloExpr::mobius(a, b, c, d)?;
        let h_inv = HoloExpr::mobius(d, -b, -c, a)?;
        let pair = ConformalPair { h, h_inv, source, target };
        pair.validate()?;
        Ok(pair)
    }

    fn validate(&self) -> Result<()> {
        let close = |a: C64, b: C64| (a - b).norm() <= PAIR_TOL * b.norm().max(1.0);
        for z in self.source.sample_grid(2) {
            let w = self.h.eval(z)?;
            if !self.target.contains(w) {
                return Err(Error::BadParameter(format!("map sends {z} to {w}, outside {}", self.target)));
            }
            if !close(self.h_inv.eval(w)?, z) {
                return Err(Error::BadParameter(format!("inverse fails to round-trip at {z}")));
            }
        }
        for w in self.target.sample_grid(1) {
            let z = self.h_inv.eval(w)?;
            if !self.source.contains(z) {
                return Err(Error::BadParameter(format!("inverse sends {w} to {z}, outside {}", self.source)));
            }
            if !close(self.h.eval(z)?, w) {
                return Err(Error::BadParameter(format!("map fails to round-trip at {w}")));
            }
        }
        Ok(())
    }

    /// The same correspondence read in the opposite direction.
    pub fn inverse(&self) -> ConformalPair {
        ConformalPair {
            h: self.h_inv.clone(),
            h_inv: self.h.clone(),
            source: self.target.clone(),
            target: self.source.clone(),
        }
    }
}

/// `h(z) = i(1 + z)/(1 − z)`, `h⁻¹(w) = (w − i)/(w + i)`.
pub fn cayley() -> ConformalPair {
    let i = C64::new(0.0, 1.0);
    let one = C64::new(1.0, 0.0);
    ConformalPair {
        h: HoloExpr::mobius(i, i, -one, one).expect("Cayley map is nondegenerate"),
        h_inv: HoloExpr::mobius(one, -i, one, i).expect("Cayley inverse is nondegenerate"),
        source: Domain::unit_disc(),
        target: Domain::upper_half_plane(),
    }
}

/// Text form of a map: `cayley` or `mobius:a,b,c,d`, where each coefficient is
/// a real number or a complex number written `re:im`.
#[derive(Clone, Debug, PartialEq)]
pub enum MapSpec {
    Cayley,
    Mobius([C64; 4]),
}

impl MapSpec {
    /// Builds the pair from the unit disc onto `target`.
    pub fn build(&self, target: &Domain) -> Result<ConformalPair> {
        match self {
            MapSpec::Cayley => {
                let pair = cayley();
                if &pair.target != target {
                    return Err(Error::BadParameter(format!("the Cayley map targets {}, not {target}", pair.target)));
                }
                Ok(pair)
            }
            MapSpec::Mobius(c) => ConformalPair::mobius(*c, Domain::unit_disc(), target.clone()),
        }
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSpec::Cayley => write!(f, "cayley"),
            MapSpec::Mobius(c) => {
                let parts: Vec<String> = c
                    .iter()
                    .map(|v| if v.im == 0.0 { format!("{}", v.re) } else { format!("{}:{}", v.re, v.im) })
                    .collect();
                write!(f, "mobius:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for MapSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "cayley" {
            return Ok(MapSpec::Cayley);
        }
        let rest = s.strip_prefix("mobius:").ok_or_else(|| Error::parse(0, format!("unknown map '{s}'")))?;
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::parse(7, "mobius needs four coefficients a,b,c,d"));
        }
        let mut out = [C64::new(0.0, 0.0); 4];
        for (slot, p) in out.iter_mut().zip(parts) {
            let bad = || Error::parse(7, format!("bad coefficient '{p}'"));
            *slot = match p.split_once(':') {
                Some((re, im)) => C64::new(re.trim().parse().map_err(|_| bad())?, im.trim().parse().map_err(|_| bad())?),
                None => C64::new(p.trim().parse().map_err(|_| bad())?, 0.0),
            };
        }
        Ok(MapSpec::Mobius(out))
    }
}

/// `H = (G ∘ h) / h'`, a symbol on the source domain.
pub fn transfer_symbol(g: &HoloExpr, pair: &ConformalPair) -> HoloExpr {
    // h' of a Möbius map never vanishes
    HoloExpr::ratio_unchecked(HoloExpr::compose(g.clone(), pair.h.clone()), pair.h.derivative())
}

/// `|h(φ_H(t, z0)) − φ_G(t, h(z0))|`.
pub fn conjugation_residual(g: &HoloExpr, pair: &ConformalPair, z0: C64, t: f64, tol: f64) -> Result<f64> {
    let transferred = transfer_symbol(g, pair);
    let source_end = flow_map(&transferred, &pair.source, z0, t, tol)?;
    let target_end = flow_map(g, &pair.target, pair.h.eval(z0)?, t, tol)?;
    Ok((pair.h.eval(source_end)? - target_end).norm())
}
