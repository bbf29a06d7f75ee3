use std::fmt;
use std::sync::Arc;

use crate::geometry::Domain;
use crate::{Error, Result, C64};

/// Denominators smaller than this in magnitude are treated as poles.
pub const EPS_POLE: f64 = 1e-13;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Node of a holomorphic expression tree.
#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(C64),
    /// The identity `z`.
    Var,
    /// Polynomial with ascending coefficients.
    Poly(Vec<C64>),
    Ratio(HoloExpr, HoloExpr),
    /// `(a z + b) / (c z + d)` with `ad − bc ≠ 0`.
    Mobius { a: C64, b: C64, c: C64, d: C64 },
    Sum(HoloExpr, HoloExpr),
    Product(HoloExpr, HoloExpr),
    /// `outer(inner(z))`.
    Compose(HoloExpr, HoloExpr),
    /// `z ↦ e^z`.
    Exp,
    Neg(HoloExpr),
}

/// Immutable, cheaply clonable holomorphic expression.
#[derive(Clone, PartialEq)]
pub struct HoloExpr(Arc<Node>);

impl HoloExpr {
    fn wrap(node: Node) -> Self {
        HoloExpr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn constant(c: C64) -> Self {
        Self::wrap(Node::Const(c))
    }

    pub fn real(x: f64) -> Self {
        Self::constant(C64::new(x, 0.0))
    }

    pub fn var() -> Self {
        Self::wrap(Node::Var)
    }

    pub fn exp() -> Self {
        Self::wrap(Node::Exp)
    }

    pub fn poly(coeffs: Vec<C64>) -> Self {
        Self::wrap(Node::Poly(coeffs))
    }

    /// Polynomial from real ascending coefficients.
    pub fn poly_re(coeffs: &[f64]) -> Self {
        Self::poly(coeffs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn mobius(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        let det = a * d - b * c;
        if det.norm() <= EPS_POLE {
            return Err(Error::BadParameter(format!("degenerate Möbius map: ad - bc = {det}")));
        }
        Ok(Self::wrap(Node::Mobius { a, b, c, d }))
    }

    /// `num / den`; rejects a denominator that vanishes at every probe point.
    pub fn ratio(num: HoloExpr, den: HoloExpr) -> Result<Self> {
        let probes = ratio_probes();
        let nonzero = probes
            .iter()
            .any(|&z| matches!(den.eval(z), Ok(v) if v.norm() > EPS_POLE));
        if !nonzero {
            return Err(Error::BadParameter(format!("denominator {den} vanishes on every probe")));
        }
        Ok(Self::wrap(Node::Ratio(num, den)))
    }

    pub(crate) fn ratio_unchecked(num: HoloExpr, den: HoloExpr) -> Self {
        Self::wrap(Node::Ratio(num, den))
    }

    pub fn sum(a: HoloExpr, b: HoloExpr) -> Self {
        match (a.node(), b.node()) {
            (Node::Const(x), _) if *x == ZERO => b,
            (_, Node::Const(y)) if *y == ZERO => a,
            (Node::Const(x), Node::Const(y)) => Self::constant(x + y),
            _ => Self::wrap(Node::Sum(a, b)),
        }
    }

    pub fn difference(a: HoloExpr, b: HoloExpr) -> Self {
        Self::sum(a, Self::neg(b))
    }

    pub fn product(a: HoloExpr, b: HoloExpr) -> Self {
        match (a.node(), b.node()) {
            (Node::Const(x), _) | (_, Node::Const(x)) if *x == ZERO => Self::constant(ZERO),
            (Node::Const(x), _) if *x == ONE => b,
            (_, Node::Const(y)) if *y == ONE => a,
            (Node::Const(x), Node::Const(y)) => Self::constant(x * y),
            _ => Self::wrap(Node::Product(a, b)),
        }
    }

    pub fn neg(a: HoloExpr) -> Self {
        match a.node() {
            Node::Const(c) => Self::constant(-c),
            Node::Neg(inner) => inner.clone(),
            _ => Self::wrap(Node::Neg(a)),
        }
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: HoloExpr, inner: HoloExpr) -> Self {
        match (outer.node(), inner.node()) {
            (Node::Const(_), _) => outer,
            (_, Node::Var) => outer,
            (Node::Var, _) => inner,
            _ => Self::wrap(Node::Compose(outer, inner)),
        }
    }

    /// Integer power by repeated products; `z^n` becomes a monomial.
    pub fn powi(base: HoloExpr, n: u32) -> Self {
        if let Node::Var = base.node() {
            let mut c = vec![ZERO; n as usize + 1];
            c[n as usize] = ONE;
            return Self::poly(c);
        }
        if let Node::Const(c) = base.node() {
            return Self::constant(c.powu(n));
        }
        let mut acc = Self::constant(ONE);
        for _ in 0..n {
            acc = Self::product(acc, base.clone());
        }
        acc
    }

    /// Returns the constant value if the tree does not depend on `z`.
    pub fn as_constant(&self) -> Option<C64> {
        match self.node() {
            Node::Const(c) => Some(*c),
            Node::Var | Node::Exp => None,
            Node::Poly(c) => {
                if c.iter().skip(1).all(|x| *x == ZERO) {
                    Some(c.first().copied().unwrap_or(ZERO))
                } else {
                    None
                }
            }
            Node::Mobius { a, b, c, d } => {
                if *a == ZERO && *c == ZERO {
                    Some(b / d)
                } else {
                    None
                }
            }
            Node::Ratio(n, d) => Some(n.as_constant()? / d.as_constant()?),
            Node::Sum(a, b) => Some(a.as_constant()? + b.as_constant()?),
            Node::Product(a, b) => Some(a.as_constant()? * b.as_constant()?),
            Node::Neg(a) => Some(-a.as_constant()?),
            Node::Compose(f, g) => f.as_constant().or_else(|| {
                let v = g.as_constant()?;
                f.eval(v).ok()
            }),
        }
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        match self.node() {
            Node::Const(c) => Ok(*c),
            Node::Var => Ok(z),
            Node::Poly(c) => Ok(c.iter().rev().fold(ZERO, |acc, a| acc * z + a)),
            Node::Ratio(n, d) => {
                let den = d.eval(z)?;
                if !(den.norm() > EPS_POLE) {
                    return Err(Error::Pole { at: z, magnitude: den.norm() });
                }
                Ok(n.eval(z)? / den)
            }
            Node::Mobius { a, b, c, d } => {
                let den = c * z + d;
                if !(den.norm() > EPS_POLE) {
                    return Err(Error::Pole { at: z, magnitude: den.norm() });
                }
                Ok((a * z + b) / den)
            }
            Node::Sum(a, b) => Ok(a.eval(z)? + b.eval(z)?),
            Node::Product(a, b) => Ok(a.eval(z)? * b.eval(z)?),
            Node::Compose(f, g) => f.eval(g.eval(z)?),
            Node::Exp => Ok(z.exp()),
            Node::Neg(a) => Ok(-a.eval(z)?),
        }
    }

    /// Structural derivative.
    pub fn derivative(&self) -> HoloExpr {
        match self.node() {
            Node::Const(_) => Self::constant(ZERO),
            Node::Var => Self::constant(ONE),
            Node::Poly(c) => {
                if c.len() <= 1 {
                    return Self::constant(ZERO);
                }
                let d: Vec<C64> = c.iter().enumerate().skip(1).map(|(k, a)| a * k as f64).collect();
                if d.len() == 1 {
                    Self::constant(d[0])
                } else {
                    Self::poly(d)
                }
            }
            Node::Mobius { a, b, c, d } => {
                let det = a * d - b * c;
                Self::ratio_unchecked(Self::constant(det), Self::poly(vec![d * d, 2.0 * c * d, c * c]))
            }
            Node::Ratio(n, d) => {
                let top = Self::difference(
                    Self::product(n.derivative(), d.clone()),
                    Self::product(n.clone(), d.derivative()),
                );
                if let Node::Const(c) = top.node() {
                    if *c == ZERO {
                        return top;
                    }
                }
                Self::ratio_unchecked(top, Self::product(d.clone(), d.clone()))
            }
            Node::Sum(a, b) => Self::sum(a.derivative(), b.derivative()),
            Node::Product(a, b) => Self::sum(
                Self::product(a.derivative(), b.clone()),
                Self::product(a.clone(), b.derivative()),
            ),
            Node::Compose(f, g) => Self::product(Self::compose(f.derivative(), g.clone()), g.derivative()),
            Node::Exp => Self::exp(),
            Node::Neg(a) => Self::neg(a.derivative()),
        }
    }
}

fn ratio_probes() -> Vec<C64> {
    let mut probes = Domain::unit_disc().sample_grid(1);
    probes.extend([C64::new(2.0, 0.0), C64::new(0.0, 2.5), C64::new(-3.0, -1.0), C64::new(10.0, 7.0)]);
    probes
}

impl fmt::Debug for HoloExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HoloExpr({self})")
    }
}

fn fmt_c(c: &C64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else {
        format!("({}{:+}i)", c.re, c.im)
    }
}

impl fmt::Display for HoloExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Const(c) => write!(f, "{}", fmt_c(c)),
            Node::Var => write!(f, "z"),
            Node::Poly(c) => {
                let terms: Vec<String> = c
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| **a != ZERO)
                    .map(|(k, a)| match k {
                        0 => fmt_c(a),
                        1 => format!("{}*z", fmt_c(a)),
                        _ => format!("{}*z^{k}", fmt_c(a)),
                    })
                    .collect();
                if terms.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "({})", terms.join(" + "))
                }
            }
            Node::Ratio(n, d) => write!(f, "({n})/({d})"),
            Node::Mobius { a, b, c, d } => {
                write!(f, "mobius({},{},{},{})", fmt_c(a), fmt_c(b), fmt_c(c), fmt_c(d))
            }
            Node::Sum(a, b) => write!(f, "({a} + {b})"),
            Node::Product(a, b) => write!(f, "{a}*{b}"),
            Node::Compose(outer, inner) => write!(f, "[{outer}]∘[{inner}]"),
            Node::Exp => write!(f, "exp(z)"),
            Node::Neg(a) => write!(f, "-({a})"),
        }
    }
}
