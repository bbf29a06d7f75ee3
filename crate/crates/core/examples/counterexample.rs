// A flow that is global on the disc of radius 2 but leaves the unit disc.

use holoflow::counterexample::{build_counterexample, run_counterexample, CounterexampleReport, DW_TOL};
use holoflow::hfun::bp_classify;
use holoflow::{HoloExpr, Result, C64};

pub fn run_example() -> Result<Vec<CounterexampleReport>> {
    let b = C64::new(1.5, 0.0);
    let g = build_counterexample(b, HoloExpr::real(1.0))?;
    println!("G(z) = {g}");
    println!("on the unit disc: {:?}", bp_classify(&g, 2, 1e-8)?.status);

    let mut reports = Vec::new();
    for z0 in [C64::new(0.99, 0.0), C64::new(0.0, 0.0), C64::new(-0.5, 0.0), C64::new(0.0, 0.8)] {
        let rep = run_counterexample(b, HoloExpr::real(1.0), z0, 40.0, 1e-10)?;
        println!(
            "z0 = {z0:<8} crosses |z| = 1 at t = {:<14} max |phi| = {:.4}, |phi(40) - b| = {:.1e} (within {DW_TOL}: {})",
            rep.t_exit.map_or("never".into(), |t| format!("{t:.10}")),
            rep.max_modulus,
            rep.dw_distance,
            rep.converged(DW_TOL)
        );
        reports.push(rep);
    }
    Ok(reports)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()?;
    Ok(())
}
