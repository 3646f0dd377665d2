//! SVG rendering of two-dimensional projections of certificates.

use anyhow::{bail, Result};
use cxtv_core::geometry::MassCloud;
use cxtv_core::io::{CertificateFile, CertificatePayload};
use cxtv_core::scalar::to_f64;
use cxtv_core::transversal::TransversalCert;
use cxtv_core::tverberg::TverbergCert;
use cxtv_core::Q;
use std::fmt::Write;

const SIZE: f64 = 480.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

type P2 = [f64; 2];

enum Shape {
    Dot { at: P2, color: &'static str, r: f64 },
    Polygon { pts: Vec<P2>, color: &'static str },
    /// The line `a.y = b`, clipped to the view.
    Line { a: P2, b: f64, color: &'static str },
    Cross { at: P2 },
}

pub fn render(file: &CertificateFile) -> Result<String> {
    let shapes = match &file.payload {
        CertificatePayload::Transversal(c) | CertificatePayload::OddTransversal(c) => {
            let Some(ms) = file.instance.payload.measures() else { bail!("certificate carries no measures") };
            transversal_shapes(c, ms)?
        }
        CertificatePayload::Tverberg(c) => {
            let cxtv_core::io::InstancePayload::Tverberg(inst) = &file.instance.payload else {
                bail!("certificate carries no Tverberg instance")
            };
            tverberg_shapes(c, &inst.sets.iter().map(|s| s.points.clone()).collect::<Vec<_>>())?
        }
        CertificatePayload::Flag(_) => bail!("flag certificates are not plotted"),
    };
    Ok(svg(&shapes))
}

fn fvec(v: &[Q]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthonormal basis of the orthogonal complement of `span(dir)` in `R^n`.
fn complement(dir: &[Vec<f64>], n: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut out = Vec::new();
    for v in dir.iter().cloned().chain((0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())) {
        let mut w = v.clone();
        for b in &basis {
            let c = dot(&w, b);
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let norm = dot(&w, &w).sqrt();
        if norm > 1e-9 {
            w.iter_mut().for_each(|x| *x /= norm);
            if basis.len() >= dir.len() {
                out.push(w.clone());
            }
            basis.push(w);
        }
    }
    out
}

fn transversal_shapes(c: &TransversalCert, ms: &[MassCloud]) -> Result<Vec<Shape>> {
    let n = c.flat.ambient_dim();
    let dir: Vec<Vec<f64>> = c.flat.direction_basis.iter().map(|v| fvec(v)).collect();
    let comp = complement(&dir, n);
    if comp.len() != 2 {
        bail!("the flat has codimension {}, only codimension 2 is plotted", comp.len());
    }
    let proj = |x: &[Q]| -> P2 {
        let x = fvec(x);
        [dot(&x, &comp[0]), dot(&x, &comp[1])]
    };
    let mut shapes = Vec::new();
    for (i, (m, dv)) in ms.iter().zip(&c.depths).enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        for (p, w) in m.points.iter().zip(&m.weights) {
            shapes.push(Shape::Dot { at: proj(p), color, r: 2.0 + 20.0 * to_f64(w).sqrt() });
        }
        let nrm = fvec(&dv.witness_normal);
        shapes.push(Shape::Line { a: [dot(&nrm, &comp[0]), dot(&nrm, &comp[1])], b: to_f64(&dv.witness_offset), color });
    }
    shapes.push(Shape::Cross { at: proj(&c.flat.base) });
    Ok(shapes)
}

fn tverberg_shapes(c: &TverbergCert, sets: &[Vec<Vec<Q>>]) -> Result<Vec<Shape>> {
    if c.projection.len() != 2 {
        bail!("the projection frame has dimension {}, only 2 is plotted", c.projection.len());
    }
    let frame: Vec<Vec<f64>> = c.projection.iter().map(|v| fvec(v)).collect();
    let proj = |x: &[Q]| -> P2 {
        let x = fvec(x);
        [dot(&x, &frame[0]), dot(&x, &frame[1])]
    };
    let mut shapes = Vec::new();
    let mut color_index = 0;
    for (pts, parts) in sets.iter().zip(&c.partitions) {
        for part in parts {
            let color = PALETTE[color_index % PALETTE.len()];
            color_index += 1;
            let ys: Vec<P2> = part.iter().map(|&i| proj(&pts[i])).collect();
            shapes.push(Shape::Polygon { pts: hull(&ys), color });
            shapes.extend(ys.into_iter().map(|at| Shape::Dot { at, color, r: 3.0 }));
        }
    }
    let q = fvec(&c.q);
    shapes.push(Shape::Cross { at: [q[0], q[1]] });
    Ok(shapes)
}

/// Monotone chain; degenerate inputs come back as segments or points.
fn hull(pts: &[P2]) -> Vec<P2> {
    let mut p = pts.to_vec();
    p.sort_by(|a, b| a.partial_cmp(b).unwrap());
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let cross = |o: P2, a: P2, b: P2| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut h: Vec<P2> = Vec::new();
    for pass in 0..2 {
        let start = h.len();
        let iter: Box<dyn Iterator<Item = &P2>> = if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &x in iter {
            while h.len() >= start + 2 && cross(h[h.len() - 2], h[h.len() - 1], x) <= 0.0 {
                h.pop();
            }
            h.push(x);
        }
        h.pop();
    }
    h
}

fn svg(shapes: &[Shape]) -> String {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    let mut see = |p: &P2| {
        for i in 0..2 {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    };
    for s in shapes {
        match s {
            Shape::Dot { at, .. } | Shape::Cross { at } => see(at),
            Shape::Polygon { pts, .. } => pts.iter().for_each(&mut see),
            Shape::Line { .. } => {}
        }
    }
    if !lo[0].is_finite() {
        lo = [-1.0, -1.0];
        hi = [1.0, 1.0];
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9) * 1.2;
    let mid = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
    let lo = [mid[0] - span / 2.0, mid[1] - span / 2.0];
    let px = |p: P2| ((p[0] - lo[0]) / span * SIZE, SIZE - (p[1] - lo[1]) / span * SIZE);

    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for s in shapes {
        match s {
            Shape::Polygon { pts, color } => {
                let list: Vec<String> = pts.iter().map(|&p| px(p)).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                let _ = writeln!(
                    out,
                    r#"<polygon points="{}" fill="{color}" fill-opacity="0.15" stroke="{color}" stroke-width="1.5"/>"#,
                    list.join(" ")
                );
            }
            Shape::Line { a, b, color } => {
                let n2 = a[0] * a[0] + a[1] * a[1];
                if n2 < 1e-18 {
                    continue;
                }
                let foot = [a[0] * b / n2, a[1] * b / n2];
                let t = [-a[1] / n2.sqrt() * span * 2.0, a[0] / n2.sqrt() * span * 2.0];
                let (x1, y1) = px([foot[0] - t[0], foot[1] - t[1]]);
                let (x2, y2) = px([foot[0] + t[0], foot[1] + t[1]]);
                let _ = writeln!(
                    out,
                    r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{color}" stroke-dasharray="6 4"/>"#
                );
            }
            Shape::Dot { at, color, r } => {
                let (x, y) = px(*at);
                let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="{color}" fill-opacity="0.7"/>"#);
            }
            Shape::Cross { at } => {
                let (x, y) = px(*at);
                let _ = writeln!(
                    out,
                    r#"<path d="M {} {} L {} {} M {} {} L {} {}" stroke="black" stroke-width="2"/>"#,
                    x - 6.0,
                    y - 6.0,
                    x + 6.0,
                    y + 6.0,
                    x - 6.0,
                    y + 6.0,
                    x + 6.0,
                    y - 6.0
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_square_with_interior_point() {
        let h = hull(&[[0.0, 0.0], [1.0, 0.0], [0.5, 0.5], [1.0, 1.0], [0.0, 1.0]]);
        assert_eq!(h.len(), 4);
    }

    #[test]
    fn complement_of_a_coordinate_plane() {
        let c = complement(&[vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0]], 4);
        assert_eq!(c, vec![vec![0.0, 0.0, 1.0, 0.0], vec![0.0, 0.0, 0.0, 1.0]]);
    }
}
