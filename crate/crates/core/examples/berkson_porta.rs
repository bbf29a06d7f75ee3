// Build symbols in Berkson–Porta form and recover their parameters.

use holoflow::hfun::{bp_build, bp_classify, herglotz_check, BpVerdict};
use holoflow::{HoloExpr, Result, C64};

pub fn run_example() -> Result<Vec<BpVerdict>> {
    let f: HoloExpr = "(1 + z)/(1 - z) + 0.5".parse()?;
    println!("min Re F on the grid: {:.3}", herglotz_check(&f, 2)?.min_re);

    let mut verdicts = Vec::new();
    // a boundary b sitting on a pole of F leaves the fit inconclusive, so use -1
    for b in [C64::new(0.0, 0.0), C64::new(0.4, -0.3), C64::new(-1.0, 0.0)] {
        let g = bp_build(b, f.clone())?;
        let v = bp_classify(&g, 2, 1e-8)?;
        println!("b = {b:<10} -> {:?}, recovered b = {:?}", v.status, v.b);
        verdicts.push(v);
    }

    // G = z pushes everything out, so no Herglotz factorization exists
    let v = bp_classify(&HoloExpr::var(), 2, 1e-8)?;
    println!("G = z -> {:?}, witness {:?}", v.status, v.witness);
    verdicts.push(v);
    Ok(verdicts)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()?;
    Ok(())
}
