//! Holomorphic expressions, truncated Taylor series, and the Berkson–Porta
//! procedures.

mod bp;
mod expr;
mod parse;
mod series;

pub use bp::{
    bp_build, bp_classify, herglotz_check, herglotz_check_on, zero_candidates, BpStatus, BpVerdict, EscapeWitness,
    HerglotzSample, NEWTON_ITERS, NEWTON_SEEDS, NEWTON_TOL, REMOVABLE_RADIUS, TOL_HERGLOTZ,
};
pub use expr::{HoloExpr, Node, EPS_POLE};
pub use parse::parse_expr;
pub use series::{taylor, SeriesFn};

/// Default sampling radius for [`taylor`].
pub const DEFAULT_TAYLOR_RADIUS: f64 = 0.5;

/// Taylor series of a symbol used inside the flow and semigroup machinery.
///
/// Samples on the unit circle when the symbol can be evaluated there, which
/// keeps roundoff in high-order coefficients at machine level, and falls back
/// to [`DEFAULT_TAYLOR_RADIUS`] otherwise.
pub fn symbol_series(g: &HoloExpr, n: usize) -> crate::Result<SeriesFn> {
    match taylor(g, n, 1.0) {
        Ok(s) => Ok(s),
        Err(crate::Error::Pole { .. }) | Err(crate::Error::Tolerance(_)) => taylor(g, n, DEFAULT_TAYLOR_RADIUS),
        Err(e) => Err(e),
    }
}
