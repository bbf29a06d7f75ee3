use crate::C64;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("pole at {at}: denominator magnitude {magnitude:e} below threshold")]
    Pole { at: C64, magnitude: f64 },

    #[error("point {point} is outside the domain {domain}")]
    Domain { point: C64, domain: String },

    #[error("step size underflow at t = {t} while {distance:e} away from the boundary")]
    Stiffness { t: f64, distance: f64 },

    #[error("trajectory escaped the domain at t = {t} near {point}")]
    Escape { t: f64, point: C64 },

    #[error("series degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("tolerance not met: {0}")]
    Tolerance(String),

    #[error("Herglotz condition fails: Re F = {min_re:e} at {at}")]
    Herglotz { min_re: f64, at: C64 },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}
