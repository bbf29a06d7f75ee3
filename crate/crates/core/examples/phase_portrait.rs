// Render a phase portrait to SVG. Pass an output path as the first argument,
// otherwise the SVG goes to a temporary file.

use holoflow::cli::render_portrait;
use holoflow::semiflow::integrate;
use holoflow::{Domain, HoloExpr, Result};

pub fn run_example() -> Result<String> {
    let g: HoloExpr = "(1.5 - z)(1 - 0.375z)".parse()?;
    let d: Domain = "disc:0,0,2".parse()?;
    let seeds = d.sample_grid(1);
    let mut paths = Vec::new();
    for (i, z) in seeds.iter().enumerate() {
        match integrate(&g, &d, *z, 10.0, 1e-9) {
            Ok(t) => paths.push((i, t)),
            Err(e) => eprintln!("seed {i} skipped: {e}"),
        }
    }
    let svg = render_portrait(&d, seeds.len(), &paths);
    println!("{} trajectories, {} bytes of SVG", paths.len(), svg.len());
    Ok(svg)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let svg = run_example()?;
    let path = std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().join("portrait.svg").to_string_lossy().into_owned());
    std::fs::write(&path, svg)?;
    println!("wrote {path}");
    Ok(())
}
