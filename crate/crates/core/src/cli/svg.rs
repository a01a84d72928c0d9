//! Static SVG rendering of a trajectory: `(x, z)` and `(y, z)` projections on
//! unit-circle backdrops.

use std::fmt::Write;

use crate::dynamics::{Sample, Trajectory};

type Coord = fn(&Sample) -> f64;

const PANEL: f64 = 320.0;
const MARGIN: f64 = 30.0;
const MAX_POINTS: usize = 5_000;

pub fn render(traj: &Trajectory) -> String {
    let width = 2.0 * PANEL + 3.0 * MARGIN;
    let height = PANEL + 2.0 * MARGIN + 20.0;
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let step = traj.samples.len().div_ceil(MAX_POINTS).max(1);
    let panels: [(&str, Coord); 2] = [("x", |p| p.s.x()), ("y", |p| p.s.y())];
    for (i, (label, horiz)) in panels.into_iter().enumerate() {
        let x0 = MARGIN + i as f64 * (PANEL + MARGIN);
        let cx = x0 + PANEL / 2.0;
        let cy = MARGIN + PANEL / 2.0;
        let r = PANEL / 2.0 - 10.0;
        let _ = writeln!(
            out,
            r##"<circle cx="{cx:.3}" cy="{cy:.3}" r="{r:.3}" fill="none" stroke="#999" stroke-width="1"/>"##
        );
        let _ = writeln!(
            out,
            r##"<line x1="{:.3}" y1="{cy:.3}" x2="{:.3}" y2="{cy:.3}" stroke="#ccc"/><line x1="{cx:.3}" y1="{:.3}" x2="{cx:.3}" y2="{:.3}" stroke="#ccc"/>"##,
            cx - r,
            cx + r,
            cy - r,
            cy + r
        );
        let mut pts = String::new();
        let mut emit = |p: &Sample| {
            let _ = write!(pts, "{:.3},{:.3} ", cx + r * horiz(p), cy - r * p.s.z());
        };
        traj.samples.iter().step_by(step).for_each(&mut emit);
        emit(traj.last());
        let _ = writeln!(
            out,
            r##"<polyline points="{}" fill="none" stroke="#c0392b" stroke-width="1.2"/>"##,
            pts.trim_end()
        );
        let _ = writeln!(
            out,
            r#"<text x="{cx:.3}" y="{:.3}" font-family="sans-serif" font-size="14" text-anchor="middle">({label}, z) {}</text>"#,
            MARGIN + PANEL + 15.0,
            traj.config
        );
    }
    out.push_str("</svg>\n");
    out
}
