//! SVG plots of two-dimensional partitions.

use std::fmt::Write as _;
use std::path::Path;

use num_traits::Zero;

use crate::abstraction::{Observation, Partition};
use crate::error::{Error, Result};
use crate::geometry::{Cell, Region};
use crate::rational::{to_f64, Rational};

/// Vertices of the closure of a bounded planar cell, counter-clockwise.
pub fn polygon(cell: &Cell) -> Result<Vec<(Rational, Rational)>> {
    if cell.dim() != 2 {
        return Err(Error::Precondition("polygon needs a planar cell".into()));
    }
    let rows = cell.constraints();
    let mut verts: Vec<(Rational, Rational)> = Vec::new();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let (a, b) = (rows[i].normal(), rows[j].normal());
            let det = &a[0] * &b[1] - &a[1] * &b[0];
            if det.is_zero() {
                continue;
            }
            let (p, q) = (rows[i].offset(), rows[j].offset());
            let x = (p * &b[1] - q * &a[1]) / &det;
            let y = (&a[0] * q - &b[0] * p) / &det;
            let inside = rows.iter().all(|c| c.closure().holds_at(&[x.clone(), y.clone()]));
            if inside && !verts.contains(&(x.clone(), y.clone())) {
                verts.push((x, y));
            }
        }
    }
    if verts.len() > 2 {
        let n = verts.len() as f64;
        let cx = verts.iter().map(|v| to_f64(&v.0)).sum::<f64>() / n;
        let cy = verts.iter().map(|v| to_f64(&v.1)).sum::<f64>() / n;
        verts.sort_by(|u, v| {
            let au = (to_f64(&u.1) - cy).atan2(to_f64(&u.0) - cx);
            let av = (to_f64(&v.1) - cy).atan2(to_f64(&v.0) - cx);
            au.total_cmp(&av)
        });
    }
    Ok(verts)
}

fn fill(obs: &Observation) -> &'static str {
    match obs {
        Observation::PiD => "#cfe3f7",
        Observation::Region(_) => "#bfe8bf",
        Observation::Empty => "#ffffff",
    }
}

struct Frame {
    lo: (f64, f64),
    scale: f64,
    height: f64,
}

impl Frame {
    fn points(&self, verts: &[(Rational, Rational)]) -> String {
        verts
            .iter()
            .map(|(x, y)| {
                let sx = (to_f64(x) - self.lo.0) * self.scale + 10.0;
                let sy = self.height - ((to_f64(y) - self.lo.1) * self.scale + 10.0);
                format!("{sx:.3},{sy:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn shape(out: &mut String, frame: &Frame, verts: &[(Rational, Rational)], style: &str) {
    match verts.len() {
        0 => {}
        1 | 2 => {
            let _ = writeln!(
                out,
                r#"<polyline points="{}" {style} fill="none"/>"#,
                frame.points(verts)
            );
        }
        _ => {
            let _ = writeln!(out, r#"<polygon points="{}" {style}/>"#, frame.points(verts));
        }
    }
}

/// The plot as a string, or `None` when the partition is not planar.
pub fn render_svg(partition: &Partition, highlight: &Region) -> Result<Option<String>> {
    if partition.dim() != 2 {
        return Ok(None);
    }
    let mut shapes = Vec::new();
    for b in partition.blocks() {
        shapes.push((polygon(&b.cell)?, fill(&b.observation)));
    }
    let mut marked = Vec::new();
    for c in highlight.cells() {
        marked.push(polygon(c)?);
    }
    let all = shapes.iter().map(|(v, _)| v).chain(&marked).flatten();
    let (mut lo, mut hi) = ((f64::MAX, f64::MAX), (f64::MIN, f64::MIN));
    for (x, y) in all {
        let (x, y) = (to_f64(x), to_f64(y));
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    if lo.0 > hi.0 {
        lo = (0.0, 0.0);
        hi = (1.0, 1.0);
    }
    let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-9);
    let scale = 600.0 / span;
    let width = (hi.0 - lo.0) * scale + 20.0;
    let height = (hi.1 - lo.1) * scale + 20.0;
    let frame = Frame { lo, scale, height };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.3} {height:.3}">"#
    );
    for (verts, color) in &shapes {
        shape(
            &mut out,
            &frame,
            verts,
            &format!(r##"fill="{color}" stroke="#555555" stroke-width="0.5""##),
        );
    }
    for verts in &marked {
        shape(
            &mut out,
            &frame,
            verts,
            r##"fill="#8e44ad" fill-opacity="0.55" stroke="#5b2c6f" stroke-width="0.8""##,
        );
    }
    out.push_str("</svg>\n");
    Ok(Some(out))
}

/// Writes the plot; returns `false` (and writes nothing) when not planar.
pub fn export_svg(partition: &Partition, highlight: &Region, path: &Path) -> Result<bool> {
    match render_svg(partition, highlight)? {
        Some(svg) => {
            std::fs::write(path, svg)?;
            Ok(true)
        }
        None => Ok(false),
    }
}
