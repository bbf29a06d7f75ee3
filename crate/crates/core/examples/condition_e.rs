// Weighted coefficient spaces and the evaluation condition (E).

use holoflow::spaces::{condition_e, eval_norm, membership_estimate, CoefSpace, ConditionEStatus};
use holoflow::hfun::taylor;
use holoflow::{HoloExpr, Result, C64};

pub fn run_example() -> Result<Vec<(String, ConditionEStatus)>> {
    let mut out = Vec::new();
    for text in ["h2", "bergman", "dirichlet", "hpbeta:p=2,beta=pow:0.6", "hpbeta:p=2,beta=geom:2", "hpbeta:p=1,beta=pow:-0.5"] {
        let space: CoefSpace = text.parse()?;
        let v = condition_e(&space);
        println!("{text:28} {:?}: {}", v.status, v.evidence);
        out.push((text.to_string(), v.status));
    }

    // norm of point evaluation at 0.6 in H2 is (1 - 0.36)^(-1/2)
    let h2 = CoefSpace::hardy();
    for n in [10, 50, 200] {
        println!("|delta_0.6| with N = {n:3}: {:.10}", eval_norm(&h2, C64::new(0.6, 0.0), n)?);
    }

    // a decay-trend heuristic, not a proof of membership
    let decaying: HoloExpr = "1/(1 - z/2)".parse()?;
    let flat: HoloExpr = "1/(1 - z)".parse()?;
    for (name, f) in [("1/(1 - z/2)", decaying), ("1/(1 - z)", flat)] {
        let est = membership_estimate(&h2, &taylor(&f, 64, 0.9)?, 16)?;
        println!("{name:12} tail slope {:+.3} -> {:?}", est.tail_slope, est.verdict);
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()?;
    Ok(())
}
