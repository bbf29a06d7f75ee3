//! The composition semigroup `T(t)f = f ∘ φ(t, ·)` on truncated series, and
//! numerical checks of the generator identities `Af = G f'`.
//!
//! Every norm here is a truncated norm. Forward differences are used for the
//! generator limit (order 1 in `h`), central differences for the transport
//! equation (order 2).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::hfun::{symbol_series, HoloExpr, SeriesFn};
use crate::semiflow::{flow_series, flow_series_at, MIN_WORK_DEGREE};
use crate::spaces::{kernel_coeffs, kernel_derivative_coeffs, norm, pairing, CoefSpace};
use crate::{fmt17, Error, Result, C64};

/// Integration tolerance used where an operation has no tolerance argument.
pub const INTERNAL_TOL: f64 = 1e-12;

/// `T(t)f`, truncated to the degree of `f`.
pub fn apply(g: &HoloExpr, t: f64, f: &SeriesFn, tol: f64) -> Result<SeriesFn> {
    let phi = flow_series(g, t, f.degree(), tol)?;
    f.compose(&phi.coeffs)
}

/// `T(t)f` at each of the sorted `times`, from one integration of the flow.
pub fn apply_at(g: &HoloExpr, times: &[f64], f: &SeriesFn, tol: f64) -> Result<Vec<SeriesFn>> {
    flow_series_at(g, times, f.degree(), tol)?
        .iter()
        .map(|phi| f.compose(&phi.coeffs))
        .collect()
}

/// `T(t)` on the monomial basis; column `k` holds the coefficients of `φ^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub t: f64,
    pub n: usize,
    /// Row-major `(n+1) × (n+1)`.
    entries: Vec<C64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperatorSummary {
    pub t: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub spectral_radius_estimate: f64,
    pub residuals: BTreeMap<String, f64>,
}

impl OperatorMatrix {
    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.entries[row * (self.n + 1) + col]
    }

    pub fn column(&self, col: usize) -> SeriesFn {
        SeriesFn::new((0..=self.n).map(|r| self.entry(r, col)).collect())
    }

    pub fn apply(&self, f: &SeriesFn) -> Result<SeriesFn> {
        if f.degree() != self.n {
            return Err(Error::DegreeMismatch { left: self.n, right: f.degree() });
        }
        let a = f.coeffs();
        Ok(SeriesFn::new(
            (0..=self.n).map(|r| (0..=self.n).map(|k| self.entry(r, k) * a[k]).sum()).collect(),
        ))
    }

    pub fn matmul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.n != other.n {
            return Err(Error::DegreeMismatch { left: self.n, right: other.n });
        }
        let m = self.n + 1;
        let mut entries = vec![C64::new(0.0, 0.0); m * m];
        for i in 0..m {
            for k in 0..m {
                let a = self.entry(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..m {
                    entries[i * m + j] += a * other.entry(k, j);
                }
            }
        }
        Ok(OperatorMatrix { t: self.t + other.t, n: self.n, entries })
    }

    pub fn max_distance(&self, other: &OperatorMatrix) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::DegreeMismatch { left: self.n, right: other.n });
        }
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Largest `|M_kk|`. The matrix is lower triangular when `φ(t, 0) = 0`,
    /// and then this is the spectral radius.
    pub fn spectral_radius_estimate(&self) -> f64 {
        (0..=self.n).map(|k| self.entry(k, k).norm()).fold(0.0, f64::max)
    }

    /// Row-major, one matrix row per line, each entry as `re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for r in 0..=self.n {
            let row: Vec<String> = (0..=self.n)
                .map(|c| {
                    let v = self.entry(r, c);
                    format!("{},{}", fmt17(v.re), fmt17(v.im))
                })
                .collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn summary(&self, residuals: BTreeMap<String, f64>) -> OperatorSummary {
        OperatorSummary {
            t: self.t,
            n: self.n,
            spectral_radius_estimate: self.spectral_radius_estimate(),
            residuals,
        }
    }
}

pub fn operator_matrix(g: &HoloExpr, t: f64, n: usize, tol: f64) -> Result<OperatorMatrix> {
    let phi = flow_series(g, t, n, tol)?.coeffs;
    let m = n + 1;
    let mut entries = vec![C64::new(0.0, 0.0); m * m];
    let mut col = SeriesFn::constant(C64::new(1.0, 0.0), n);
    for k in 0..m {
        if k > 0 {
            col = col.mul(&phi)?;
        }
        for (r, v) in col.coeffs().iter().enumerate() {
            entries[r * m + k] = *v;
        }
    }
    Ok(OperatorMatrix { t, n, entries })
}

/// Truncated series of `G f'` at the degree of `f`.
pub fn generator_term(g: &HoloExpr, f: &SeriesFn) -> Result<SeriesFn> {
    let gs = symbol_series(g, f.degree())?;
    gs.mul(&f.derivative())
}

/// `‖(T(h)f − f)/h − G f'‖`; expected to be `O(h)`.
pub fn generator_residual(g: &HoloExpr, f: &SeriesFn, space: &CoefSpace, h: f64, tol: f64) -> Result<f64> {
    if !(1e-6..=0.1).contains(&h) {
        return Err(Error::BadParameter(format!("difference step must lie in [1e-6, 0.1], got {h}")));
    }
    let moved = apply(g, h, f, tol)?;
    let quotient = moved.sub(f)?.scale_re(1.0 / h);
    Ok(norm(space, &quotient.sub(&generator_term(g, f)?)?))
}

/// `‖(1/t) ∫_0^t T(s)(G f') ds − (1/t)(T(t)f − f)‖` with composite Simpson on
/// `quad_points + 1` nodes.
pub fn maximality_residual(
    g: &HoloExpr,
    f: &SeriesFn,
    space: &CoefSpace,
    t: f64,
    quad_points: usize,
    tol: f64,
) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::BadParameter(format!("time must be positive, got {t}")));
    }
    if quad_points < 2 || quad_points % 2 != 0 {
        return Err(Error::BadParameter(format!("Simpson needs an even number of panels, got {quad_points}")));
    }
    // T(s) does not commute with truncation when φ(s, 0) ≠ 0, so G f' is kept
    // to a higher working degree and the result truncated at the end
    let n = f.degree();
    let fw = f.with_degree(n + MIN_WORK_DEGREE);
    let gf = generator_term(g, &fw)?;
    let step = t / quad_points as f64;
    let nodes: Vec<f64> = (0..=quad_points).map(|j| if j == quad_points { t } else { j as f64 * step }).collect();
    let phis = flow_series_at(g, &nodes, fw.degree(), tol)?;
    let mut integral = SeriesFn::zero(fw.degree());
    for (j, phi) in phis.iter().enumerate() {
        let w = if j == 0 || j == quad_points {
            1.0
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        };
        integral = integral.add(&gf.compose(&phi.coeffs)?.scale_re(w * step / 3.0))?;
    }
    let moved = fw.compose(&phis[quad_points].coeffs)?;
    let diff = integral.sub(&moved.sub(&fw)?)?.scale_re(1.0 / t);
    Ok(norm(space, &diff.with_degree(n)))
}

/// `|∂_t u − G(z) ∂_z u|` for `u(t, z) = (T(t)f)(z)`, both derivatives by
/// central differences.
pub fn transport_pde_residual(g: &HoloExpr, f: &SeriesFn, z: C64, t: f64, h_t: f64, h_z: f64) -> Result<f64> {
    if !(h_t > 0.0 && h_z > 0.0) {
        return Err(Error::BadParameter("difference steps must be positive".into()));
    }
    if !(z.norm() + h_z < 1.0) {
        return Err(Error::BadParameter(format!("need |z| + h_z < 1, got |z| = {}", z.norm())));
    }
    if t < h_t {
        return Err(Error::BadParameter(format!("need t >= h_t for a central difference, got t = {t}")));
    }
    // pad so u is the flow value rather than a low-degree truncation of it
    let fw = f.with_degree(f.degree().max(2 * MIN_WORK_DEGREE));
    let u = apply_at(g, &[t - h_t, t, t + h_t], &fw, INTERNAL_TOL)?;
    let du_dt = (u[2].eval(z) - u[0].eval(z)) / (2.0 * h_t);
    let dz = C64::new(h_z, 0.0);
    let du_dz = (u[1].eval(z + dz) - u[1].eval(z - dz)) / (2.0 * dz);
    Ok((du_dt - g.eval(z)? * du_dz).norm())
}

/// `(t, ‖T(t)f − f‖)` for each `t` in `t_list`, in the given order.
pub fn strong_continuity_report(
    g: &HoloExpr,
    f: &SeriesFn,
    space: &CoefSpace,
    t_list: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let mut order: Vec<usize> = (0..t_list.len()).collect();
    order.sort_by(|a, b| t_list[*a].total_cmp(&t_list[*b]));
    let sorted: Vec<f64> = order.iter().map(|&i| t_list[i]).collect();
    let moved = apply_at(g, &sorted, f, INTERNAL_TOL)?;
    let mut out = vec![(0.0, 0.0); t_list.len()];
    for (slot, m) in order.into_iter().zip(moved) {
        out[slot] = (t_list[slot], norm(space, &m.sub(f)?));
    }
    Ok(out)
}

/// `|⟨G f', k_z⟩ − G(z)⟨f, ∂k_z⟩|`: the pointwise form of the generator's
/// adjoint acting on point evaluations. Vanishes up to the truncation of
/// `G f'`. Only for `p = 2`.
pub fn adjoint_identity_residual(g: &HoloExpr, f: &SeriesFn, space: &CoefSpace, z: C64) -> Result<f64> {
    let n = f.degree();
    let lhs = pairing(space, &generator_term(g, f)?, &kernel_coeffs(space, z, n)?)?;
    let rhs = g.eval(z)? * pairing(space, f, &kernel_derivative_coeffs(space, z, n)?)?;
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn neg_z() -> HoloExpr {
        HoloExpr::neg(HoloExpr::var())
    }

    fn one_minus_z2() -> HoloExpr {
        HoloExpr::poly_re(&[1.0, 0.0, -1.0])
    }

    fn rotation() -> HoloExpr {
        HoloExpr::product(HoloExpr::constant(c(0.0, 1.0)), HoloExpr::var())
    }

    fn random_series(rng: &mut ChaCha8Rng, n: usize) -> SeriesFn {
        SeriesFn::new((0..=n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
    }

    #[test]
    fn apply_examples() {
        let e1 = SeriesFn::from_real(&[0.0, 1.0], 1);
        let out = apply(&neg_z(), 2f64.ln(), &e1, 1e-12).unwrap();
        assert!(out.max_distance(&SeriesFn::from_real(&[0.0, 0.5], 1)).unwrap() < 1e-10);

        let f = SeriesFn::from_coeffs(&[c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.0)], 2);
        assert_eq!(apply(&one_minus_z2(), 0.0, &f, 1e-10).unwrap(), f);

        // tanh(0.5 + atanh z) = (T + z)/(1 + T z), T = tanh 0.5
        let tt = 0.5f64.tanh();
        let mut want = vec![tt];
        let mut pow = 1.0;
        for _ in 1..=6 {
            want.push((1.0 - tt * tt) * pow);
            pow *= -tt;
        }
        let out = apply(&one_minus_z2(), 0.5, &SeriesFn::identity(6), 1e-12).unwrap();
        assert!(out.max_distance(&SeriesFn::from_real(&want, 6)).unwrap() < 1e-9);
    }

    #[test]
    fn operator_matrix_examples() {
        let m = operator_matrix(&neg_z(), 0.7, 6, 1e-12).unwrap();
        for r in 0..=6 {
            for k in 0..=6 {
                let want = if r == k { (-0.7 * k as f64).exp() } else { 0.0 };
                assert!((m.entry(r, k) - want).norm() < 1e-10);
            }
        }
        assert!((m.spectral_radius_estimate() - 1.0).abs() < 1e-12);

        let id = operator_matrix(&one_minus_z2(), 0.0, 5, 1e-10).unwrap();
        for r in 0..=5 {
            for k in 0..=5 {
                assert_eq!(id.entry(r, k), if r == k { c(1.0, 0.0) } else { c(0.0, 0.0) });
            }
        }

        let m = operator_matrix(&one_minus_z2(), 0.3, 8, 1e-12).unwrap();
        assert_eq!(m.column(0), SeriesFn::constant(c(1.0, 0.0), 8));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let f = random_series(&mut rng, 8);
            let direct = apply(&one_minus_z2(), 0.3, &f, 1e-12).unwrap();
            assert!(m.apply(&f).unwrap().max_distance(&direct).unwrap() < 1e-9);
        }
    }

    #[test]
    fn operator_semigroup_law() {
        // symbols fixing 0 give triangular matrices, for which truncation is exact
        let fixing_zero = [neg_z(), rotation(), HoloExpr::poly_re(&[0.0, -1.0, 1.0])];
        for g in &fixing_zero {
            for (t, s) in [(0.2, 0.3), (0.5, 0.25), (0.1, 0.7)] {
                let mt = operator_matrix(g, t, 10, 1e-12).unwrap();
                let ms = operator_matrix(g, s, 10, 1e-12).unwrap();
                let mts = operator_matrix(g, t + s, 10, 1e-12).unwrap();
                let d = mt.matmul(&ms).unwrap().max_distance(&mts).unwrap();
                assert!(d < 1e-8, "{g} t={t} s={s}: {d}");
            }
        }
        // otherwise the law holds on the leading block of a higher-degree matrix
        let g = one_minus_z2();
        for (t, s) in [(0.2, 0.3), (0.5, 0.25)] {
            let mt = operator_matrix(&g, t, 64, 1e-12).unwrap();
            let ms = operator_matrix(&g, s, 64, 1e-12).unwrap();
            let mts = operator_matrix(&g, t + s, 64, 1e-12).unwrap();
            let prod = mt.matmul(&ms).unwrap();
            for r in 0..=10 {
                for k in 0..=10 {
                    let d = (prod.entry(r, k) - mts.entry(r, k)).norm();
                    assert!(d < 1e-8, "t={t} s={s} ({r},{k}): {d}");
                }
            }
        }
    }

    #[test]
    fn multiplicativity() {
        // exact at degree N when deg f + deg h <= N
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for g in [one_minus_z2(), rotation(), HoloExpr::poly_re(&[0.0, -1.0, 1.0])] {
            let f = random_series(&mut rng, 6).with_degree(12);
            let h = random_series(&mut rng, 6).with_degree(12);
            let lhs = apply(&g, 0.4, &f.mul(&h).unwrap(), 1e-12).unwrap();
            let rhs = apply(&g, 0.4, &f, 1e-12).unwrap().mul(&apply(&g, 0.4, &h, 1e-12).unwrap()).unwrap();
            assert!(lhs.max_distance(&rhs).unwrap() < 1e-9);
        }
    }

    #[test]
    fn generator_examples() {
        let h2 = CoefSpace::hardy();
        let e1 = SeriesFn::from_real(&[0.0, 1.0], 1);
        let r = generator_residual(&neg_z(), &e1, &h2, 1e-3, 1e-12).unwrap();
        assert!(r <= 1e-3 && (r - 5e-4).abs() < 1e-5, "{r}");

        let k = SeriesFn::constant(c(2.0, -1.0), 8);
        assert!(generator_residual(&one_minus_z2(), &k, &h2, 0.05, 1e-10).unwrap() < 1e-14);

        let rs: Vec<f64> = [1e-2, 5e-3, 2.5e-3]
            .iter()
            .map(|h| generator_residual(&one_minus_z2(), &e1, &h2, *h, 1e-13).unwrap())
            .collect();
        for w in rs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!((order - 1.0).abs() < 0.1, "order {order}");
        }
        assert!(generator_residual(&neg_z(), &e1, &h2, 0.5, 1e-10).is_err());
    }

    #[test]
    fn maximality_examples() {
        let h2 = CoefSpace::hardy();
        let e1 = SeriesFn::from_real(&[0.0, 1.0], 1);
        assert!(maximality_residual(&neg_z(), &e1, &h2, 1.0, 64, 1e-12).unwrap() <= 1e-8);
        let k = SeriesFn::constant(c(1.0, 0.0), 4);
        assert!(maximality_residual(&rotation(), &k, &h2, 0.8, 8, 1e-10).unwrap() < 1e-15);
        let e2 = SeriesFn::from_real(&[0.0, 0.0, 1.0], 2);
        assert!(maximality_residual(&one_minus_z2(), &e2, &h2, 0.5, 64, 1e-12).unwrap() <= 1e-6);
        assert!(maximality_residual(&neg_z(), &e1, &h2, 1.0, 7, 1e-12).is_err());
    }

    #[test]
    fn maximality_converges_with_nodes() {
        let h2 = CoefSpace::hardy();
        let e2 = SeriesFn::from_real(&[0.0, 0.0, 1.0], 2);
        let coarse = maximality_residual(&one_minus_z2(), &e2, &h2, 0.5, 4, 1e-13).unwrap();
        let fine = maximality_residual(&one_minus_z2(), &e2, &h2, 0.5, 8, 1e-13).unwrap();
        assert!(fine < coarse / 8.0, "{coarse} {fine}");
    }

    #[test]
    fn transport_examples() {
        let e1 = SeriesFn::from_real(&[0.0, 1.0], 1);
        assert!(transport_pde_residual(&neg_z(), &e1, c(0.5, 0.0), 1.0, 1e-3, 1e-3).unwrap() <= 1e-6);
        let k = SeriesFn::constant(c(0.5, 0.5), 3);
        assert!(transport_pde_residual(&one_minus_z2(), &k, c(0.1, 0.1), 0.5, 1e-3, 1e-3).unwrap() < 1e-12);
        assert!(transport_pde_residual(&one_minus_z2(), &e1, c(0.2, 0.0), 0.4, 1e-3, 1e-3).unwrap() <= 1e-5);
        assert!(transport_pde_residual(&neg_z(), &e1, c(0.999, 0.0), 1.0, 1e-3, 1e-2).is_err());
    }

    #[test]
    fn strong_continuity_examples() {
        let h2 = CoefSpace::hardy();
        let e1 = SeriesFn::from_real(&[0.0, 1.0], 1);
        let ts: Vec<f64> = (1..=6).map(|k| 0.5f64.powi(k)).collect();
        let rep = strong_continuity_report(&neg_z(), &e1, &h2, &ts).unwrap();
        for (t, v) in &rep {
            assert!((v - (1.0 - (-t).exp())).abs() < 1e-10);
        }
        for w in rep.windows(2) {
            assert!((w[1].1 / w[0].1 - 0.5).abs() < 0.15);
        }
        let zero = strong_continuity_report(&one_minus_z2(), &SeriesFn::zero(5), &h2, &ts).unwrap();
        assert!(zero.iter().all(|(_, v)| *v == 0.0));

        let f = SeriesFn::from_real(&[0.0, 1.0, 1.0], 2);
        let ts: Vec<f64> = (1..=8).map(|k| 0.5f64.powi(k)).collect();
        let rep = strong_continuity_report(&one_minus_z2(), &f, &h2, &ts).unwrap();
        assert!(rep.windows(2).all(|w| w[1].1 < w[0].1));
        assert!(rep[7].1 < 1e-2);
    }

    #[test]
    fn reproducing_pairing() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for sp in [CoefSpace::hardy(), CoefSpace::bergman(), CoefSpace::dirichlet()] {
            let f = random_series(&mut rng, 16);
            let moved = apply(&one_minus_z2(), 0.3, &f, 1e-12).unwrap();
            let z = c(0.3, 0.2);
            let v = pairing(&sp, &moved, &kernel_coeffs(&sp, z, 16).unwrap()).unwrap();
            assert!((v - moved.eval(z)).norm() < 1e-12);
        }
    }

    #[test]
    fn adjoint_identity_on_polynomials() {
        // G f' has degree at most N when deg G + deg f - 1 <= N
        let f = SeriesFn::from_coeffs(&[c(1.0, 0.0), c(0.5, -0.5), c(0.0, 2.0), c(-1.0, 0.0)], 12);
        for sp in [CoefSpace::hardy(), CoefSpace::bergman(), CoefSpace::dirichlet()] {
            for z in [c(0.0, 0.0), c(0.4, -0.2), c(-0.7, 0.1)] {
                assert!(adjoint_identity_residual(&one_minus_z2(), &f, &sp, z).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn summary_serializes() {
        let m = operator_matrix(&neg_z(), 0.5, 3, 1e-10).unwrap();
        let mut res = BTreeMap::new();
        res.insert("apply".to_string(), 0.0);
        let v = serde_json::to_value(m.summary(res)).unwrap();
        assert_eq!(v["N"], 3);
        assert_eq!(v["spectral_radius_estimate"], 1.0);
        assert_eq!(m.to_csv().lines().count(), 4);
    }
}
