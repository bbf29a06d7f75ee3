// Integrate a few flows on the unit disc and watch one of them escape.
//
// `G(z) = -z` contracts to 0, `G(z) = iz` rotates, and `G(z) = z` pushes every
// point out through the circle at time `ln(1/|z0|)`.

use holoflow::semiflow::{escape_time, flow_map, integrate, FlowStatus};
use holoflow::{Domain, HoloExpr, Result, C64};

pub fn run_example() -> Result<Vec<(String, FlowStatus)>> {
    let disc = Domain::unit_disc();
    let z0 = C64::new(0.5, 0.0);
    let mut rows = Vec::new();
    for text in ["-z", "i z", "z", "1 - z^2"] {
        let g: HoloExpr = text.parse()?;
        let traj = integrate(&g, &disc, z0, 5.0, 1e-10)?;
        println!("G = {text:8} final point {:.6} at t = {:.6}", traj.final_point(), traj.final_time());
        rows.push((text.to_string(), traj.status));
    }

    let t = escape_time(&HoloExpr::var(), &disc, z0, 10.0, 1e-10)?.expect("z escapes the disc");
    println!("escape time from 0.5 under G = z: {t:.9} (ln 2 = {:.9})", 2f64.ln());

    // the flow map obeys phi(t + s) = phi(t) o phi(s)
    let g: HoloExpr = "1 - z^2".parse()?;
    let direct = flow_map(&g, &disc, z0, 1.5, 1e-11)?;
    let stepped = flow_map(&g, &disc, flow_map(&g, &disc, z0, 0.5, 1e-11)?, 1.0, 1e-11)?;
    println!("semigroup residual for 1 - z^2: {:.2e}", (direct - stepped).norm());
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()?;
    Ok(())
}
