// The composition semigroup on truncated Taylor series.
//
// Applies `T(t)f = f o phi(t)` for `G = 1 - z^2`, builds the operator matrix,
// and checks the generator identities `Af = G f'` numerically.

use holoflow::semigroup::{apply, generator_residual, maximality_residual, operator_matrix, strong_continuity_report};
use holoflow::spaces::{norm, CoefSpace};
use holoflow::{HoloExpr, Result, SeriesFn};

pub fn run_example() -> Result<f64> {
    let g: HoloExpr = "1 - z^2".parse()?;
    let h2 = CoefSpace::hardy();
    let f = SeriesFn::from_real(&[0.0, 1.0, 1.0], 32);

    let tf = apply(&g, 0.5, &f, 1e-12)?;
    println!("|f| = {:.6}, |T(0.5) f| = {:.6}", norm(&h2, &f), norm(&h2, &tf));
    for (k, a) in tf.coeffs().iter().take(5).enumerate() {
        println!("  a_{k} = {:+.10}", a.re);
    }

    let m = operator_matrix(&g, 0.5, 32, 1e-12)?;
    let gap = m.apply(&f)?.max_distance(&tf)?;
    println!("matrix vs direct application: {gap:.2e}");

    for h in [1e-2, 5e-3, 2.5e-3] {
        println!("generator residual at h = {h:<7}: {:.3e}", generator_residual(&g, &f, &h2, h, 1e-12)?);
    }
    let maximal = maximality_residual(&g, &f, &h2, 0.5, 64, 1e-12)?;
    println!("integral identity residual: {maximal:.3e}");

    let ts: Vec<f64> = (1..=6).map(|k| 0.5f64.powi(k)).collect();
    for (t, d) in strong_continuity_report(&g, &f, &h2, &ts)? {
        println!("|T({t:.5}) f - f| = {d:.3e}");
    }
    Ok(maximal)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()?;
    Ok(())
}
