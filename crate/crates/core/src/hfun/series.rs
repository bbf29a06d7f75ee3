use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::HoloExpr;
use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Coefficients whose scaled magnitude falls below this multiple of the
/// sampling roundoff are zeroed by [`taylor`].
const CHOP_FACTOR: f64 = 64.0 * f64::EPSILON;

/// Taylor coefficients `a_0..=a_N` about 0, truncated at a fixed degree `N`.
///
/// All arithmetic is modulo `z^{N+1}`: products and compositions never look at
/// coefficients beyond `N`. No convergence radius is tracked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesFn {
    coeffs: Vec<C64>,
}

impl SeriesFn {
    /// Builds a series from `N + 1` coefficients. An empty vector becomes the
    /// degree-0 zero series.
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        SeriesFn { coeffs }
    }

    /// Pads or truncates `coeffs` to degree `n`.
    pub fn from_coeffs(coeffs: &[C64], n: usize) -> Self {
        let mut v = vec![ZERO; n + 1];
        for (dst, src) in v.iter_mut().zip(coeffs) {
            *dst = *src;
        }
        SeriesFn { coeffs: v }
    }

    pub fn from_real(coeffs: &[f64], n: usize) -> Self {
        let c: Vec<C64> = coeffs.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_coeffs(&c, n)
    }

    pub fn zero(n: usize) -> Self {
        SeriesFn { coeffs: vec![ZERO; n + 1] }
    }

    pub fn constant(c: C64, n: usize) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[0] = c;
        s
    }

    /// The series of `z` (zero at degree 0).
    pub fn identity(n: usize) -> Self {
        Self::monomial(1, n)
    }

    /// `z^k` truncated to degree `n`.
    pub fn monomial(k: usize, n: usize) -> Self {
        let mut s = Self::zero(n);
        if k <= n {
            s.coeffs[k] = C64::new(1.0, 0.0);
        }
        s
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    fn check(&self, other: &SeriesFn) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch { left: self.degree(), right: other.degree() });
        }
        Ok(())
    }

    /// Index of the last nonzero coefficient, if any.
    fn effective_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.effective_degree().is_none()
    }

    pub fn add(&self, other: &SeriesFn) -> Result<SeriesFn> {
        self.check(other)?;
        Ok(SeriesFn { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &SeriesFn) -> Result<SeriesFn> {
        self.check(other)?;
        Ok(SeriesFn { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() })
    }

    pub fn scale(&self, s: C64) -> SeriesFn {
        SeriesFn { coeffs: self.coeffs.iter().map(|a| a * s).collect() }
    }

    pub fn scale_re(&self, s: f64) -> SeriesFn {
        SeriesFn { coeffs: self.coeffs.iter().map(|a| a * s).collect() }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &SeriesFn) -> Result<SeriesFn> {
        self.check(other)?;
        Ok(SeriesFn { coeffs: truncated_product(&self.coeffs, &other.coeffs) })
    }

    /// `self^k` truncated.
    pub fn pow(&self, k: usize) -> SeriesFn {
        let n = self.degree();
        let mut acc = SeriesFn::constant(C64::new(1.0, 0.0), n);
        for _ in 0..k {
            acc.coeffs = truncated_product(&acc.coeffs, &self.coeffs);
        }
        acc
    }

    /// Coefficients of `self ∘ inner` truncated to degree `N`, by Horner's
    /// scheme with truncated products.
    ///
    /// Nothing requires `inner(0) = 0`; when it is not, the result is the
    /// composition of the truncated polynomial, which only approximates the
    /// true composition if the outer series converges well at `inner(0)`.
    pub fn compose(&self, inner: &SeriesFn) -> Result<SeriesFn> {
        self.check(inner)?;
        let n = self.degree();
        let Some(top) = self.effective_degree() else {
            return Ok(SeriesFn::zero(n));
        };
        let mut acc = vec![ZERO; n + 1];
        acc[0] = self.coeffs[top];
        for k in (0..top).rev() {
            acc = truncated_product(&acc, &inner.coeffs);
            acc[0] += self.coeffs[k];
        }
        Ok(SeriesFn { coeffs: acc })
    }

    /// Coefficient derivative `((k+1) a_{k+1})`, keeping degree `N` (the top
    /// coefficient becomes 0).
    pub fn derivative(&self) -> SeriesFn {
        let n = self.degree();
        let mut out = vec![ZERO; n + 1];
        for k in 0..n {
            out[k] = self.coeffs[k + 1] * (k + 1) as f64;
        }
        SeriesFn { coeffs: out }
    }

    /// Value of the truncated polynomial at `z`.
    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, a| acc * z + a)
    }

    /// Derivative of the truncated polynomial at `z`.
    pub fn eval_derivative(&self, z: C64) -> C64 {
        let mut acc = ZERO;
        for (k, a) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * z + a * k as f64;
        }
        acc
    }

    /// Same coefficients truncated or zero-padded to degree `n`.
    pub fn with_degree(&self, n: usize) -> SeriesFn {
        Self::from_coeffs(&self.coeffs, n)
    }

    /// Largest coefficient distance to another series of the same degree.
    pub fn max_distance(&self, other: &SeriesFn) -> Result<f64> {
        self.check(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }
}

pub(crate) fn truncated_product(a: &[C64], b: &[C64]) -> Vec<C64> {
    let n = a.len().min(b.len());
    let mut out = vec![ZERO; n];
    let b_top = match b[..n].iter().rposition(|c| *c != ZERO) {
        Some(t) => t,
        None => return out,
    };
    for (i, ai) in a[..n].iter().enumerate() {
        if *ai == ZERO {
            continue;
        }
        let stop = (n - i).min(b_top + 1);
        for j in 0..stop {
            out[i + j] += ai * b[j];
        }
    }
    out
}

/// Taylor coefficients of `f` about 0 from `M = max(4N, 64)` equispaced
/// samples on the circle of radius `r` (trapezoidal Cauchy integral).
///
/// Coefficients with `|a_k| r^k` below the sampling roundoff level
/// (`64 ε · max |f|` on the circle) carry no information and are set to zero,
/// so the `r^{-k}` amplification of roundoff cannot produce large spurious
/// high-order coefficients.
pub fn taylor(f: &HoloExpr, n: usize, r: f64) -> Result<SeriesFn> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::BadParameter(format!("sampling radius must lie in (0, 1], got {r}")));
    }
    let m = (4 * n).max(64);
    let mut samples = Vec::with_capacity(m);
    for j in 0..m {
        let z = C64::from_polar(r, 2.0 * PI * j as f64 / m as f64);
        samples.push(f.eval(z)?);
    }
    let scale = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if !scale.is_finite() {
        return Err(Error::Tolerance(format!("non-finite samples of {f} on radius {r}")));
    }
    let floor = CHOP_FACTOR * scale;
    let twiddle: Vec<C64> = (0..m).map(|q| C64::from_polar(1.0, -2.0 * PI * q as f64 / m as f64)).collect();
    let mut coeffs = vec![ZERO; n + 1];
    let mut rk = 1.0;
    for (k, coeff) in coeffs.iter_mut().enumerate() {
        let mut acc = ZERO;
        for (j, s) in samples.iter().enumerate() {
            acc += s * twiddle[(j * k) % m];
        }
        let scaled = acc / m as f64;
        if scaled.norm() >= floor {
            *coeff = scaled / rk;
        }
        rk *= r;
    }
    Ok(SeriesFn { coeffs })
}
