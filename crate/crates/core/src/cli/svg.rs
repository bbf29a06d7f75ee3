use std::fmt::Write as _;

use crate::geometry::{Domain, HalfPlaneKind};
use crate::semiflow::Trajectory;
use crate::C64;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 20.0;
// keeps runaway half-plane trajectories from producing absurd coordinates
const CLAMP: f64 = 1e4;

struct View {
    min: C64,
    scale: f64,
}

impl View {
    fn new(d: &Domain) -> Self {
        let (min, max) = d.view_box();
        let span = (max.re - min.re).max(max.im - min.im);
        View { min, scale: (SIZE - 2.0 * MARGIN) / span }
    }

    fn px(&self, z: C64) -> (f64, f64) {
        let x = MARGIN + (z.re - self.min.re) * self.scale;
        let y = SIZE - MARGIN - (z.im - self.min.im) * self.scale;
        (x.clamp(-CLAMP, CLAMP), y.clamp(-CLAMP, CLAMP))
    }
}

fn color(index: usize, total: usize) -> String {
    let hue = 360.0 * index as f64 / total.max(1) as f64;
    format!("hsl({hue:.1},70%,42%)")
}

/// Deterministic 800×800 SVG: one polyline per trajectory (dashed when it
/// escaped), the domain boundary, and a dashed unit circle when the domain is
/// not the unit disc. `trajectories` carries each trajectory's seed index.
pub fn render_portrait(d: &Domain, seed_count: usize, trajectories: &[(usize, Trajectory)]) -> String {
    let v = View::new(d);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(s, r#"<defs><clipPath id="frame"><rect width="{SIZE}" height="{SIZE}"/></clipPath></defs>"#);
    let _ = writeln!(s, r#"<g clip-path="url(#frame)">"#);
    match *d {
        Domain::Disc { center, radius } => {
            let (cx, cy) = v.px(center);
            let _ = writeln!(
                s,
                r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{:.3}" fill="none" stroke="black" stroke-width="1.5"/>"#,
                radius * v.scale
            );
        }
        Domain::HalfPlane(kind) => {
            let (a, b) = match kind {
                HalfPlaneKind::Upper => (C64::new(-1e3, 0.0), C64::new(1e3, 0.0)),
                HalfPlaneKind::Right => (C64::new(0.0, -1e3), C64::new(0.0, 1e3)),
            };
            let (x1, y1) = v.px(a);
            let (x2, y2) = v.px(b);
            let _ = writeln!(
                s,
                r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="black" stroke-width="1.5"/>"#
            );
        }
    }
    if *d != Domain::unit_disc() {
        let (cx, cy) = v.px(C64::new(0.0, 0.0));
        let _ = writeln!(
            s,
            r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{:.3}" fill="none" stroke="gray" stroke-width="1" stroke-dasharray="6 4"/>"#,
            v.scale
        );
    }
    for (index, traj) in trajectories {
        let pts: Vec<String> = traj
            .points
            .iter()
            .map(|z| {
                let (x, y) = v.px(*z);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let dash = if traj.is_escaped() { r#" stroke-dasharray="4 3""# } else { "" };
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1"{dash}/>"#,
            pts.join(" "),
            color(*index, seed_count)
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}
