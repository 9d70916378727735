//! SVG scenes of 2D complexes (or a coordinate-pair projection of them).

use std::fmt::Write;

use complex_core::SimplicialComplex;
use pushout::{PushRecord, SetModel};

use crate::error::{CliError, Result};

const SIZE: f64 = 800.0;
const MARGIN: f64 = 20.0;

/// Maps ambient coordinates to the SVG canvas, `y` pointing up.
struct Frame {
    axes: (usize, Option<usize>),
    min: (f64, f64),
    scale: f64,
}

impl Frame {
    fn new(cx: &SimplicialComplex, project: Option<(usize, usize)>) -> Result<Self> {
        let n = cx.ambient_dim();
        let axes = match (n, project) {
            (_, Some((i, j))) => {
                if i >= n || j >= n || i == j {
                    return Err(CliError::Usage(format!(
                        "projection {i},{j} needs two distinct axes below {n}"
                    )));
                }
                (i, Some(j))
            }
            (1, None) => (0, None),
            (2, None) => (0, Some(1)),
            _ => {
                return Err(CliError::Usage(format!(
                    "cannot render a complex in R^{n}; pass --project i,j"
                )))
            }
        };
        let mut lo = (f64::INFINITY, f64::INFINITY);
        let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in cx.vertices() {
            let (x, y) = Self::pick(axes, v);
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        let span = (hi.0 - lo.0).max(hi.1 - lo.1);
        let scale = if span > 0.0 { (SIZE - 2.0 * MARGIN) / span } else { 1.0 };
        Ok(Frame { axes, min: lo, scale })
    }

    fn pick(axes: (usize, Option<usize>), p: &[f64]) -> (f64, f64) {
        (p[axes.0], axes.1.map_or(0.0, |j| p[j]))
    }

    fn map(&self, p: &[f64]) -> (f64, f64) {
        let (x, y) = Self::pick(self.axes, p);
        (
            MARGIN + (x - self.min.0) * self.scale,
            SIZE - MARGIN - (y - self.min.1) * self.scale,
        )
    }
}

fn line(out: &mut String, class: &str, a: (f64, f64), b: (f64, f64)) {
    let _ = writeln!(
        out,
        r#"  <line class="{class}" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
        a.0, a.1, b.0, b.1
    );
}

fn circle(out: &mut String, class: &str, c: (f64, f64), r: f64) {
    let _ = writeln!(out, r#"  <circle class="{class}" cx="{:.3}" cy="{:.3}" r="{r:.1}"/>"#, c.0, c.1);
}

/// Draw `cx` (edges of `Q` highlighted), the set `s`, and for each push
/// record its apex, the cone rays and the boundary images.
pub fn render_svg(
    cx: &SimplicialComplex,
    s: Option<&SetModel>,
    records: &[PushRecord],
    project: Option<(usize, usize)>,
) -> Result<String> {
    let frame = Frame::new(cx, project)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    out.push_str(concat!(
        "  <style>",
        ".edge{stroke:#888;stroke-width:1}",
        ".edge.q{stroke:#1f4e9c;stroke-width:2.5}",
        ".flag{stroke:#c0392b;fill:#c0392b;fill-opacity:0.25;stroke-width:3}",
        ".sample{fill:#222}",
        ".apex{fill:#e67e22}",
        ".ray{stroke:#e67e22;stroke-dasharray:4 3}",
        ".image{fill:#27ae60}",
        "</style>\n"
    ));
    if let Some(s) = s {
        for &f in &s.full {
            let simplex = &cx.simplices()[f];
            if simplex.dim() == 2 {
                let pts: Vec<String> = simplex
                    .points()
                    .iter()
                    .map(|p| {
                        let (x, y) = frame.map(p);
                        format!("{x:.3},{y:.3}")
                    })
                    .collect();
                let _ = writeln!(out, r#"  <polygon class="flag" points="{}"/>"#, pts.join(" "));
            }
        }
    }
    for (id, simplex) in cx.simplices().iter().enumerate() {
        if simplex.dim() == 1 {
            let class = if cx.in_q(id) { "edge q" } else { "edge" };
            line(&mut out, class, frame.map(simplex.vertex(0)), frame.map(simplex.vertex(1)));
        }
    }
    if let Some(s) = s {
        for &f in &s.full {
            let simplex = &cx.simplices()[f];
            match simplex.dim() {
                0 => circle(&mut out, "flag", frame.map(simplex.vertex(0)), 5.0),
                1 => line(&mut out, "flag", frame.map(simplex.vertex(0)), frame.map(simplex.vertex(1))),
                _ => {}
            }
        }
    }
    for r in records {
        let z = frame.map(&r.z0);
        for im in &r.cone.images {
            line(&mut out, "ray", z, frame.map(&im.image));
        }
    }
    if let Some(s) = s {
        for x in &s.samples {
            circle(&mut out, "sample", frame.map(&x.point), 3.0);
        }
    }
    for r in records {
        for im in &r.cone.images {
            let (x, y) = frame.map(&im.image);
            let _ = writeln!(
                out,
                r#"  <rect class="image" x="{:.3}" y="{:.3}" width="6" height="6"/>"#,
                x - 3.0,
                y - 3.0
            );
        }
        circle(&mut out, "apex", frame.map(&r.z0), 4.0);
    }
    out.push_str("</svg>\n");
    Ok(out)
}
