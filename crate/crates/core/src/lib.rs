//! Holomorphic semiflows and the composition semigroups they induce.
//!
//! A symbol `G` holomorphic on a planar domain generates the semiflow
//! `φ(t, z)` solving `u' = G(u)`, `u(0) = z`. When the flow is global the
//! operators `T(t) f = f ∘ φ(t, ·)` form a semigroup whose generator is
//! `A f = G f'`. This crate makes those objects computable:
//!
//! - [`geometry`]: discs and half-planes with exact boundary distances.
//! - [`hfun`]: holomorphic expression trees, truncated Taylor series and the
//!   Berkson–Porta build/classify procedures.
//! - [`semiflow`]: adaptive Dormand–Prince integration with boundary escape
//!   detection, plus the flow map as a truncated power series.
//! - [`spaces`]: weighted coefficient spaces `H^p(β)`, evaluation functional
//!   norms and the evaluation condition (E).
//! - [`semigroup`]: the composition semigroup on truncated series and residual
//!   checks of its generator identities.
//! - [`counterexample`]: a flow global on the radius-2 disc that leaves the
//!   unit disc.
//! - [`transfer`]: moving symbols between the disc and a half-plane through a
//!   Möbius map.
//! - [`cli`]: the command-line front end behind the `holoflow` binary.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod cli;
pub mod counterexample;
pub mod error;
pub mod geometry;
pub mod hfun;
pub mod semiflow;
pub mod semigroup;
pub mod spaces;
pub mod transfer;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use geometry::Domain;
pub use hfun::{HoloExpr, SeriesFn};

/// Formats a real with 17 significant digits, the fixed format used by every
/// text artifact.
pub fn fmt17(x: f64) -> String {
    format!("{:.16e}", x)
}
