// Move symbols from the upper half-plane to the disc with the Cayley map and
// check that the flows correspond.

use holoflow::transfer::{cayley, conjugation_residual, transfer_symbol};
use holoflow::{HoloExpr, Result, C64};

pub fn run_example() -> Result<f64> {
    let pair = cayley();
    let mut worst: f64 = 0.0;
    for text in ["i", "-(z - i)", "0"] {
        let g: HoloExpr = text.parse()?;
        let h = transfer_symbol(&g, &pair);
        println!("G(w) = {text:9} H(0) = {:.6}", h.eval(C64::new(0.0, 0.0))?);
        for z0 in [C64::new(0.0, 0.0), C64::new(0.3, -0.4)] {
            let r = conjugation_residual(&g, &pair, z0, 1.0, 1e-10)?;
            println!("  z0 = {z0:<10} conjugation residual {r:.2e}");
            worst = worst.max(r);
        }
    }
    Ok(worst)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()?;
    Ok(())
}
