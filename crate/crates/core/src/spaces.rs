//! Weighted coefficient spaces `H^p(β)`: analytic functions on the disc whose
//! Taylor coefficients satisfy `Σ |a_n|^p β_n^p < ∞`.
//!
//! Hardy `H²` is `(p = 2, β ≡ 1)`, Bergman `A²` is `(p = 2, β_n = (n+1)^{-1/2})`
//! and Dirichlet is `(p = 2, β_n = (n+1)^{1/2})`. The Dirichlet normalization
//! makes `‖f‖² = Σ (n+1)|a_n|²`, so `f` is Dirichlet exactly when `f'` is
//! Bergman.
//!
//! VMOA and the little Bloch space have no coefficient-sequence norm and are
//! not modeled.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::hfun::SeriesFn;
use crate::{Error, Result, C64};

/// The weight sequence `β`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BetaRule {
    /// `β_n = 1`.
    Constant,
    /// `β_n = (n + 1)^s`.
    Power { s: f64 },
    /// `β_n = ρ^n`, `ρ ≥ 1`.
    Geometric { rho: f64 },
    /// Explicit leading values; beyond them the asymptotic rule applies, or
    /// the last value repeats when none is declared.
    Table { values: Vec<f64>, asymptotic: Option<Box<BetaRule>> },
}

impl BetaRule {
    pub fn power(s: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::BadParameter(format!("power exponent must be finite, got {s}")));
        }
        Ok(BetaRule::Power { s })
    }

    /// Requires `ρ ≥ 1` so that `liminf β_n^{1/n} ≥ 1`.
    pub fn geometric(rho: f64) -> Result<Self> {
        if !(rho >= 1.0 && rho.is_finite()) {
            return Err(Error::BadParameter(format!("geometric ratio must be >= 1, got {rho}")));
        }
        Ok(BetaRule::Geometric { rho })
    }

    pub fn table(values: Vec<f64>, asymptotic: Option<BetaRule>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::BadParameter("table weights must be positive and finite".into()));
        }
        if let Some(BetaRule::Table { .. }) = asymptotic {
            return Err(Error::BadParameter("asymptotic rule of a table cannot be a table".into()));
        }
        Ok(BetaRule::Table { values, asymptotic: asymptotic.map(Box::new) })
    }

    pub fn beta(&self, n: usize) -> f64 {
        match self {
            BetaRule::Constant => 1.0,
            BetaRule::Power { s } => ((n + 1) as f64).powf(*s),
            BetaRule::Geometric { rho } => rho.powi(n as i32),
            BetaRule::Table { values, asymptotic } => match (values.get(n), asymptotic) {
                (Some(v), _) => *v,
                (None, Some(rule)) => rule.beta(n),
                (None, None) => *values.last().expect("table is nonempty"),
            },
        }
    }
}

impl fmt::Display for BetaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BetaRule::Constant => write!(f, "const"),
            BetaRule::Power { s } => write!(f, "pow:{s}"),
            BetaRule::Geometric { rho } => write!(f, "geom:{rho}"),
            BetaRule::Table { values, asymptotic } => {
                let v: Vec<String> = values.iter().map(|x| x.to_string()).collect();
                write!(f, "table:{}", v.join(";"))?;
                if let Some(a) = asymptotic {
                    write!(f, "~{a}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for BetaRule {
    type Err = Error;

    /// `const`, `pow:s`, `geom:rho`, `table:v0;v1;…` optionally followed by
    /// `~<rule>` declaring the asymptotic rule.
    fn from_str(s: &str) -> Result<Self> {
        let num = |x: &str| -> Result<f64> {
            x.trim().parse().map_err(|_| Error::parse(0, format!("bad number '{x}' in beta rule")))
        };
        let s = s.trim();
        if s == "const" {
            return Ok(BetaRule::Constant);
        }
        if let Some(rest) = s.strip_prefix("pow:") {
            return BetaRule::power(num(rest)?);
        }
        if let Some(rest) = s.strip_prefix("geom:") {
            return BetaRule::geometric(num(rest)?);
        }
        if let Some(rest) = s.strip_prefix("table:") {
            let (vals, asym) = match rest.split_once('~') {
                Some((v, a)) => (v, Some(a.parse::<BetaRule>()?)),
                None => (rest, None),
            };
            let values = vals.split(';').map(num).collect::<Result<Vec<_>>>()?;
            return BetaRule::table(values, asym);
        }
        Err(Error::parse(0, format!("unknown beta rule '{s}'")))
    }
}

/// `H^p(β)` with `1 ≤ p < ∞`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefSpace {
    pub p: f64,
    pub beta: BetaRule,
    pub name: Option<String>,
}

impl CoefSpace {
    pub fn new(p: f64, beta: BetaRule) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::BadParameter(format!("exponent p must lie in [1, inf), got {p}")));
        }
        Ok(CoefSpace { p, beta, name: None })
    }

    pub fn hardy() -> Self {
        CoefSpace { p: 2.0, beta: BetaRule::Constant, name: Some("H2".into()) }
    }

    pub fn bergman() -> Self {
        CoefSpace { p: 2.0, beta: BetaRule::Power { s: -0.5 }, name: Some("Bergman".into()) }
    }

    pub fn dirichlet() -> Self {
        CoefSpace { p: 2.0, beta: BetaRule::Power { s: 0.5 }, name: Some("Dirichlet".into()) }
    }

    fn require_hilbert(&self) -> Result<()> {
        if self.p != 2.0 {
            return Err(Error::BadParameter(format!("only p = 2 has a reproducing kernel here, got p = {}", self.p)));
        }
        Ok(())
    }
}

impl fmt::Display for CoefSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name.as_deref() {
            Some("H2") => write!(f, "h2"),
            Some("Bergman") => write!(f, "bergman"),
            Some("Dirichlet") => write!(f, "dirichlet"),
            _ => write!(f, "hpbeta:p={},beta={}", self.p, self.beta),
        }
    }
}

impl FromStr for CoefSpace {
    type Err = Error;

    /// `h2`, `bergman`, `dirichlet`, or `hpbeta:p=<p>,beta=<rule>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "h2" => return Ok(CoefSpace::hardy()),
            "bergman" => return Ok(CoefSpace::bergman()),
            "dirichlet" => return Ok(CoefSpace::dirichlet()),
            _ => {}
        }
        let rest = s
            .strip_prefix("hpbeta:")
            .ok_or_else(|| Error::parse(0, format!("unknown space '{s}'")))?;
        let (p_part, beta_part) = rest
            .split_once(",beta=")
            .ok_or_else(|| Error::parse(7, "expected hpbeta:p=<p>,beta=<rule>"))?;
        let p = p_part
            .strip_prefix("p=")
            .and_then(|x| x.trim().parse::<f64>().ok())
            .ok_or_else(|| Error::parse(7, format!("bad exponent '{p_part}'")))?;
        CoefSpace::new(p, beta_part.parse()?)
    }
}

/// Truncated norm `(Σ_{n ≤ N} |a_n|^p β_n^p)^{1/p}`.
pub fn norm(space: &CoefSpace, f: &SeriesFn) -> f64 {
    let p = space.p;
    let sum: f64 = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, a)| (a.norm() * space.beta.beta(n)).powf(p))
        .sum();
    sum.powf(1.0 / p)
}

/// Norm of the evaluation functional at `z` on degree-`N` truncations:
/// `(Σ_{n ≤ N} |z|^{2n} β_n^{-2})^{1/2}`. Only for `p = 2`.
pub fn eval_norm(space: &CoefSpace, z: C64, n: usize) -> Result<f64> {
    space.require_hilbert()?;
    if !(z.norm() < 1.0) {
        return Err(Error::BadParameter(format!("evaluation point must lie in the unit disc, got {z}")));
    }
    let r2 = z.norm_sqr();
    let mut pow = 1.0;
    let mut sum = 0.0;
    for k in 0..=n {
        let b = space.beta.beta(k);
        sum += pow / (b * b);
        pow *= r2;
    }
    Ok(sum.sqrt())
}

/// Coefficients `z̄^n / β_n²` of the reproducing kernel at `z`:
/// `pairing(f, kernel(z)) = f(z)` for every truncation `f`.
pub fn kernel_coeffs(space: &CoefSpace, z: C64, n: usize) -> Result<SeriesFn> {
    space.require_hilbert()?;
    let zc = z.conj();
    let mut pow = C64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let b = space.beta.beta(k);
        out.push(pow / (b * b));
        pow *= zc;
    }
    Ok(SeriesFn::new(out))
}

/// Coefficients `n z̄^{n−1} / β_n²` representing `f ↦ f'(z)`.
pub fn kernel_derivative_coeffs(space: &CoefSpace, z: C64, n: usize) -> Result<SeriesFn> {
    space.require_hilbert()?;
    let zc = z.conj();
    let mut pow = C64::new(1.0, 0.0);
    let mut out = vec![C64::new(0.0, 0.0); n + 1];
    for (k, slot) in out.iter_mut().enumerate().skip(1) {
        let b = space.beta.beta(k);
        *slot = pow * k as f64 / (b * b);
        pow *= zc;
    }
    Ok(SeriesFn::new(out))
}

/// Inner product `Σ a_n conj(b_n) β_n²` of the `p = 2` space.
pub fn pairing(space: &CoefSpace, f: &SeriesFn, g: &SeriesFn) -> Result<C64> {
    space.require_hilbert()?;
    if f.degree() != g.degree() {
        return Err(Error::DegreeMismatch { left: f.degree(), right: g.degree() });
    }
    Ok(f.coeffs()
        .iter()
        .zip(g.coeffs())
        .enumerate()
        .map(|(n, (a, b))| {
            let w = space.beta.beta(n);
            a * b.conj() * (w * w)
        })
        .sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConditionEStatus {
    Satisfied,
    Violated,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionEVerdict {
    pub status: ConditionEStatus,
    pub evidence: String,
    /// Partial sums reported when no symbolic decision is possible.
    pub partial_sums: Option<Vec<f64>>,
}

fn verdict(status: ConditionEStatus, evidence: impl Into<String>) -> ConditionEVerdict {
    ConditionEVerdict { status, evidence: evidence.into(), partial_sums: None }
}

/// Decides the evaluation condition (E) for `H^p(β)`.
///
/// For `p > 1`, with `q = p/(p−1)`, (E) holds iff `Σ β_n^{-q} = ∞`; for
/// `p = 1` it holds iff `inf β_n = 0`. Both are decided from the rule kind,
/// never from finitely many terms.
pub fn condition_e(space: &CoefSpace) -> ConditionEVerdict {
    use ConditionEStatus::*;
    let p = space.p;
    if p == 1.0 {
        return match &space.beta {
            BetaRule::Table { values, asymptotic: Some(rule) } => {
                let tail = condition_e(&CoefSpace { p, beta: (**rule).clone(), name: None });
                let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
                match tail.status {
                    Satisfied => verdict(Satisfied, format!("table tail follows {rule}, whose infimum is 0")),
                    _ => verdict(Violated, format!("inf beta_n >= min(table min {min}, positive tail infimum) > 0")),
                }
            }
            BetaRule::Table { values, asymptotic: None } => ConditionEVerdict {
                status: Inconclusive,
                evidence: "table without declared asymptotics: inf beta_n is not finitely decidable".into(),
                partial_sums: Some(running_minimum(values)),
            },
            rule => {
                let (status, why) = infimum_zero(rule);
                verdict(status, why)
            }
        };
    }
    let q = p / (p - 1.0);
    match &space.beta {
        BetaRule::Table { values, asymptotic: Some(rule) } => {
            let tail = condition_e(&CoefSpace { p, beta: (**rule).clone(), name: None });
            ConditionEVerdict {
                status: tail.status,
                evidence: format!("finite table prefix does not affect divergence; tail rule {rule}: {}", tail.evidence),
                partial_sums: Some(partial_sums(values, q)),
            }
        }
        BetaRule::Table { values, asymptotic: None } => ConditionEVerdict {
            status: Inconclusive,
            evidence: format!("table without declared asymptotics: divergence of sum beta_n^-{q} is not finitely observable"),
            partial_sums: Some(partial_sums(values, q)),
        },
        BetaRule::Constant => verdict(Satisfied, format!("sum of beta_n^-{q} = sum 1 diverges")),
        BetaRule::Power { s } => {
            let sq = s * q;
            if sq <= 1.0 {
                verdict(Satisfied, format!("sum (n+1)^-{sq} diverges since s*q = {sq} <= 1"))
            } else {
                verdict(Violated, format!("sum (n+1)^-{sq} converges since s*q = {sq} > 1"))
            }
        }
        BetaRule::Geometric { rho } => {
            if *rho <= 1.0 {
                verdict(Satisfied, "sum rho^(-nq) with rho = 1 diverges")
            } else {
                verdict(Violated, format!("geometric sum of ratio {rho}^-{q} < 1 converges"))
            }
        }
    }
}

fn infimum_zero(rule: &BetaRule) -> (ConditionEStatus, String) {
    use ConditionEStatus::*;
    match rule {
        BetaRule::Power { s } if *s < 0.0 => (Satisfied, format!("(n+1)^{s} -> 0, so inf beta_n = 0")),
        BetaRule::Power { s } => (Violated, format!("(n+1)^{s} >= 1, so inf beta_n = 1")),
        BetaRule::Constant => (Violated, "inf beta_n = 1".into()),
        BetaRule::Geometric { rho } => (Violated, format!("{rho}^n >= 1, so inf beta_n = 1")),
        BetaRule::Table { .. } => (Inconclusive, "nested table".into()),
    }
}

fn partial_sums(values: &[f64], q: f64) -> Vec<f64> {
    values
        .iter()
        .scan(0.0, |acc, b| {
            *acc += b.powf(-q);
            Some(*acc)
        })
        .collect()
}

fn running_minimum(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .scan(f64::INFINITY, |acc, b| {
            *acc = acc.min(*b);
            Some(*acc)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Membership {
    Likely,
    Unlikely,
    Inconclusive,
}

/// Heuristic estimate of whether the full series belongs to the space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MembershipEstimate {
    pub norm_truncated: f64,
    /// Least-squares slope of `log(|a_n| β_n)` over the tail window;
    /// `-inf` when the tail vanishes identically.
    pub tail_slope: f64,
    pub verdict: Membership,
}

/// Heuristic: fits `log(|a_n| β_n)` against `n` over the last `tail_window`
/// coefficients. Slope below −0.05 reads as `Likely`, above +0.05 as
/// `Unlikely`. This is a decay-trend indicator, not a membership proof.
pub fn membership_estimate(space: &CoefSpace, f: &SeriesFn, tail_window: usize) -> Result<MembershipEstimate> {
    let n = f.degree();
    if tail_window < 2 || 2 * tail_window >= n {
        return Err(Error::BadParameter(format!(
            "tail window must satisfy 2 <= window < N/2, got window {tail_window} for N = {n}"
        )));
    }
    let norm_truncated = norm(space, f);
    let start = n + 1 - tail_window;
    let tail: Vec<(f64, f64)> = (start..=n)
        .map(|k| (k as f64, f.coeffs()[k].norm() * space.beta.beta(k)))
        .collect();
    if tail.last().map_or(true, |(_, v)| *v == 0.0) {
        return Ok(MembershipEstimate { norm_truncated, tail_slope: f64::NEG_INFINITY, verdict: Membership::Likely });
    }
    let pts: Vec<(f64, f64)> = tail.iter().filter(|(_, v)| *v > 0.0).map(|(k, v)| (*k, v.ln())).collect();
    if pts.len() < 2 {
        return Ok(MembershipEstimate { norm_truncated, tail_slope: 0.0, verdict: Membership::Inconclusive });
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let verdict = if slope < -0.05 {
        Membership::Likely
    } else if slope > 0.05 {
        Membership::Unlikely
    } else {
        Membership::Inconclusive
    };
    Ok(MembershipEstimate { norm_truncated, tail_slope: slope, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hfun::{taylor, HoloExpr};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn norm_examples() {
        let h2 = CoefSpace::hardy();
        assert_eq!(norm(&h2, &SeriesFn::from_real(&[1.0], 6)), 1.0);
        assert!((norm(&h2, &SeriesFn::from_real(&[0.0, 1.0, 1.0], 6)) - 2f64.sqrt()).abs() < 1e-15);
        // defining sum: |a_1|^2 beta_1^2 = 1 * 2
        let d = norm(&CoefSpace::dirichlet(), &SeriesFn::from_real(&[0.0, 1.0], 6));
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
        let l1 = CoefSpace::new(1.0, BetaRule::Constant).unwrap();
        assert_eq!(norm(&l1, &SeriesFn::from_coeffs(&[c(3.0, 4.0), c(-1.0, 0.0)], 3)), 6.0);
    }

    #[test]
    fn eval_norm_examples() {
        let h2 = CoefSpace::hardy();
        assert_eq!(eval_norm(&h2, c(0.0, 0.0), 17).unwrap(), 1.0);
        assert!((eval_norm(&h2, c(0.6, 0.0), 200).unwrap() - 1.25).abs() < 1e-6);
        let berg = eval_norm(&CoefSpace::bergman(), c(0.5, 0.0), 400).unwrap();
        assert!((berg - 4.0 / 3.0).abs() < 1e-5);
        assert!(eval_norm(&h2, c(1.0, 0.0), 10).is_err());
        let l1 = CoefSpace::new(1.0, BetaRule::Constant).unwrap();
        assert!(eval_norm(&l1, c(0.1, 0.0), 10).is_err());
    }

    #[test]
    fn eval_norm_converges_within_tail_bound() {
        let h2 = CoefSpace::hardy();
        for r in [0.3, 0.6, 0.9] {
            let z = c(0.0, r);
            let limit = (1.0 / (1.0 - r * r)).sqrt();
            let mut prev = 0.0;
            for n in [0, 1, 5, 20, 80] {
                let v = eval_norm(&h2, z, n).unwrap();
                assert!(v >= prev);
                prev = v;
                let bound = r.powi(2 * n as i32 + 2) / (1.0 - r * r);
                assert!(limit * limit - v * v <= bound * (1.0 + 1e-12) + 1e-14);
            }
        }
    }

    #[test]
    fn condition_e_examples() {
        use ConditionEStatus::*;
        assert_eq!(condition_e(&CoefSpace::hardy()).status, Satisfied);
        assert_eq!(condition_e(&CoefSpace::bergman()).status, Satisfied);
        assert_eq!(condition_e(&CoefSpace::dirichlet()).status, Satisfied);
        let geom = CoefSpace::new(2.0, BetaRule::geometric(2.0).unwrap()).unwrap();
        assert_eq!(condition_e(&geom).status, Violated);
        let l1 = CoefSpace::new(1.0, BetaRule::power(-0.5).unwrap()).unwrap();
        assert_eq!(condition_e(&l1).status, Satisfied);
        let l1c = CoefSpace::new(1.0, BetaRule::Constant).unwrap();
        assert_eq!(condition_e(&l1c).status, Violated);
        let geom1 = CoefSpace::new(3.0, BetaRule::geometric(1.0).unwrap()).unwrap();
        assert_eq!(condition_e(&geom1).status, Satisfied);
    }

    #[test]
    fn condition_e_flips_at_one_half() {
        use ConditionEStatus::*;
        for (s, want) in [(0.25, Satisfied), (0.5, Satisfied), (0.5000001, Violated), (0.6, Violated), (-3.0, Satisfied)] {
            let sp = CoefSpace::new(2.0, BetaRule::power(s).unwrap()).unwrap();
            assert_eq!(condition_e(&sp).status, want, "s = {s}");
        }
    }

    #[test]
    fn condition_e_tables() {
        use ConditionEStatus::*;
        let bare = CoefSpace::new(2.0, BetaRule::table(vec![1.0, 2.0, 4.0], None).unwrap()).unwrap();
        let v = condition_e(&bare);
        assert_eq!(v.status, Inconclusive);
        assert_eq!(v.partial_sums.unwrap(), vec![1.0, 1.25, 1.3125]);
        let declared =
            CoefSpace::new(2.0, BetaRule::table(vec![5.0, 0.1], Some(BetaRule::geometric(2.0).unwrap())).unwrap())
                .unwrap();
        assert_eq!(condition_e(&declared).status, Violated);
        let l1 = CoefSpace::new(1.0, BetaRule::table(vec![5.0], Some(BetaRule::power(-1.0).unwrap())).unwrap()).unwrap();
        assert_eq!(condition_e(&l1).status, Satisfied);
        let l1b = CoefSpace::new(1.0, BetaRule::table(vec![5.0], Some(BetaRule::Constant)).unwrap()).unwrap();
        assert_eq!(condition_e(&l1b).status, Violated);
    }

    #[test]
    fn rule_constraints() {
        assert!(BetaRule::geometric(0.5).is_err());
        assert!(BetaRule::table(vec![], None).is_err());
        assert!(BetaRule::table(vec![1.0, 0.0], None).is_err());
        assert!(CoefSpace::new(0.5, BetaRule::Constant).is_err());
    }

    #[test]
    fn space_text_forms() {
        for s in ["h2", "bergman", "dirichlet", "hpbeta:p=2,beta=pow:0.5", "hpbeta:p=1,beta=geom:1"] {
            assert_eq!(s.parse::<CoefSpace>().unwrap().to_string(), s);
        }
        let sp: CoefSpace = "hpbeta:p=1,beta=geom:1.0".parse().unwrap();
        assert_eq!(sp.beta, BetaRule::Geometric { rho: 1.0 });
        let t: CoefSpace = "hpbeta:p=2,beta=table:1;2;3~pow:0.25".parse().unwrap();
        assert_eq!(t.beta.beta(1), 2.0);
        assert_eq!(t.beta.beta(15), 16f64.powf(0.25));
        assert!("l2".parse::<CoefSpace>().is_err());
        assert!("hpbeta:p=2,beta=geom:0.5".parse::<CoefSpace>().is_err());
    }

    #[test]
    fn membership_examples() {
        let h2 = CoefSpace::hardy();
        let half = HoloExpr::ratio(HoloExpr::real(1.0), HoloExpr::poly_re(&[1.0, -0.5])).unwrap();
        let s = taylor(&half, 32, 0.9).unwrap();
        let est = membership_estimate(&h2, &s, 8).unwrap();
        assert_eq!(est.verdict, Membership::Likely);
        assert!((est.tail_slope - 0.5f64.ln()).abs() < 1e-3);

        let s = taylor(&half, 64, 0.9).unwrap();
        assert_eq!(membership_estimate(&h2, &s, 16).unwrap().verdict, Membership::Likely);

        let geo = HoloExpr::ratio(HoloExpr::real(1.0), HoloExpr::poly_re(&[1.0, -1.0])).unwrap();
        let s = taylor(&geo, 64, 0.9).unwrap();
        let est = membership_estimate(&h2, &s, 16).unwrap();
        assert_ne!(est.verdict, Membership::Likely);
        assert!(est.tail_slope.abs() < 0.05);

        let est = membership_estimate(&CoefSpace::bergman(), &SeriesFn::zero(40), 16).unwrap();
        assert_eq!(est.verdict, Membership::Likely);
        assert_eq!(est.norm_truncated, 0.0);

        assert!(membership_estimate(&h2, &SeriesFn::zero(20), 10).is_err());
    }

    #[test]
    fn kernel_reproduces_values() {
        for sp in [CoefSpace::hardy(), CoefSpace::bergman(), CoefSpace::dirichlet()] {
            let f = SeriesFn::from_coeffs(&[c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 0.3), c(0.25, -0.25)], 10);
            let z = c(0.4, -0.3);
            let v = pairing(&sp, &f, &kernel_coeffs(&sp, z, 10).unwrap()).unwrap();
            assert!((v - f.eval(z)).norm() < 1e-14);
            let d = pairing(&sp, &f, &kernel_derivative_coeffs(&sp, z, 10).unwrap()).unwrap();
            assert!((d - f.eval_derivative(z)).norm() < 1e-14);
        }
    }

    fn series(n: usize) -> impl Strategy<Value = SeriesFn> {
        proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n + 1)
            .prop_map(|v| SeriesFn::new(v.into_iter().map(|(a, b)| C64::new(a, b)).collect()))
    }

    fn spaces() -> Vec<CoefSpace> {
        vec![
            CoefSpace::hardy(),
            CoefSpace::bergman(),
            CoefSpace::dirichlet(),
            CoefSpace::new(1.0, BetaRule::power(-0.5).unwrap()).unwrap(),
            CoefSpace::new(3.0, BetaRule::geometric(1.1).unwrap()).unwrap(),
        ]
    }

    proptest! {
        #[test]
        fn norm_axioms(f in series(12), g in series(12), lr in -3.0f64..3.0, li in -3.0f64..3.0) {
            let lambda = C64::new(lr, li);
            for sp in spaces() {
                let nf = norm(&sp, &f);
                let scaled = norm(&sp, &f.scale(lambda));
                prop_assert!((scaled - lambda.norm() * nf).abs() <= 1e-12 * (1.0 + scaled));
                let sum = norm(&sp, &f.add(&g).unwrap());
                prop_assert!(sum <= nf + norm(&sp, &g) + 1e-12);
            }
        }

        #[test]
        fn cauchy_schwarz_at_truncation(f in series(16), r in 0.0f64..0.99, theta in 0.0f64..6.3) {
            let z = C64::from_polar(r, theta);
            for sp in [CoefSpace::hardy(), CoefSpace::bergman(), CoefSpace::dirichlet()] {
                let bound = norm(&sp, &f) * eval_norm(&sp, z, 16).unwrap();
                prop_assert!(f.eval(z).norm() <= bound * (1.0 + 1e-12));
            }
        }
    }
}
