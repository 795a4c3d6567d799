//! Static SVG of the affine chart `z = 1` of the projective plane. Points at
//! infinity sit on the boundary circle at the angle of their direction.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::geometry::{LinSubspace, PointConfig};
use crate::partition::PartitionWitness;
use crate::scalar::{to_f64, Scalar};

const SIZE: f64 = 480.0;
const RADIUS: f64 = 220.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

#[derive(Clone, Debug, Default)]
pub struct PlotData {
    pub points: Option<PointConfig>,
    pub v: Option<LinSubspace>,
    pub w: Option<LinSubspace>,
    /// Hyperplane pairs to draw, as linear forms.
    pub pairs: Vec<(Vec<Scalar>, Vec<Scalar>)>,
    pub partition: Option<PartitionWitness>,
    pub title: String,
}

struct Frame {
    cx: f64,
    cy: f64,
    scale: f64,
}

impl Frame {
    fn fit(finite: &[(f64, f64)]) -> Frame {
        if finite.is_empty() {
            return Frame { cx: 0.0, cy: 0.0, scale: 1.0 };
        }
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for &(x, y) in finite {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        let reach = finite.iter().map(|&(x, y)| (x - cx).hypot(y - cy)).fold(0.0, f64::max);
        let scale = if reach > 0.0 { 0.7 * RADIUS / reach } else { 1.0 };
        Frame { cx, cy, scale }
    }

    fn screen(&self, x: f64, y: f64) -> (f64, f64) {
        (SIZE / 2.0 + (x - self.cx) * self.scale, SIZE / 2.0 - (y - self.cy) * self.scale)
    }

    /// Chord of the line `a x + b y + c = 0` inside the boundary circle.
    fn chord(&self, form: &[f64]) -> Option<((f64, f64), (f64, f64))> {
        let (a, b, c) = (form[0], form[1], form[2]);
        let norm = a.hypot(b);
        if norm < 1e-12 {
            return None;
        }
        // signed distance of the frame centre, in screen units
        let dist = (a * self.cx + b * self.cy + c) / norm * self.scale;
        if dist.abs() >= RADIUS {
            return None;
        }
        let (nx, ny) = (a / norm, -b / norm);
        let (px, py) = (SIZE / 2.0 - dist * nx, SIZE / 2.0 - dist * ny);
        let half = (RADIUS * RADIUS - dist * dist).sqrt();
        let (tx, ty) = (-ny, nx);
        Some(((px - half * tx, py - half * ty), (px + half * tx, py + half * ty)))
    }
}

fn boundary(angle_x: f64, angle_y: f64) -> (f64, f64) {
    let t = angle_y.atan2(angle_x);
    (SIZE / 2.0 + RADIUS * t.cos(), SIZE / 2.0 - RADIUS * t.sin())
}

fn floats(v: &[Scalar]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

fn draw_line(svg: &mut String, frame: &Frame, form: &[f64], color: &str, dash: &str, label: &str) {
    match frame.chord(form) {
        Some(((x0, y0), (x1, y1))) => {
            let _ = writeln!(
                svg,
                r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="{color}" stroke-width="1.5" stroke-dasharray="{dash}"><title>{label}</title></line>"#
            );
        }
        None if form[0].hypot(form[1]) < 1e-12 => {
            let _ = writeln!(
                svg,
                r#"<circle cx="{c}" cy="{c}" r="{RADIUS}" fill="none" stroke="{color}" stroke-width="3" stroke-dasharray="{dash}"><title>{label}</title></circle>"#,
                c = SIZE / 2.0
            );
        }
        None => {}
    }
}

fn draw_subspace(svg: &mut String, frame: &Frame, s: &LinSubspace, color: &str, label: &str) {
    match s.rank() {
        1 => {
            let p = floats(&s.basis()[0]);
            let (x, y) = if p[2].abs() > 1e-12 {
                frame.screen(p[0] / p[2], p[1] / p[2])
            } else {
                boundary(p[0], p[1])
            };
            let _ = writeln!(
                svg,
                r#"<rect x="{:.2}" y="{:.2}" width="10" height="10" fill="none" stroke="{color}" stroke-width="2"><title>{label}</title></rect>"#,
                x - 5.0,
                y - 5.0
            );
        }
        2 => {
            let form = floats(&s.annihilator().basis()[0]);
            draw_line(svg, frame, &form, color, "none", label);
        }
        _ => {}
    }
}

/// Renders the chart. Only the projective plane is supported.
pub fn render_svg(data: &PlotData) -> Result<String> {
    let dims = [
        data.points.as_ref().map(PointConfig::ambient),
        data.v.as_ref().map(LinSubspace::ambient),
        data.w.as_ref().map(LinSubspace::ambient),
    ];
    if dims.iter().flatten().any(|&a| a != 3) {
        return Err(Error::InvalidArgument("plots are available for d = 2 only".into()));
    }
    let coords: Vec<Vec<f64>> = data
        .points
        .as_ref()
        .map(|x| x.points.iter().map(|p| floats(p.coords())).collect())
        .unwrap_or_default();
    let finite: Vec<(f64, f64)> =
        coords.iter().filter(|c| c[2].abs() > 1e-12).map(|c| (c[0] / c[2], c[1] / c[2])).collect();
    let frame = Frame::fit(&finite);
    let labels = data.partition.as_ref().map(PartitionWitness::labels);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r##"<circle cx="{c}" cy="{c}" r="{RADIUS}" fill="none" stroke="#999" stroke-width="1"/>"##,
        c = SIZE / 2.0
    );
    if !data.title.is_empty() {
        let _ = writeln!(svg, r#"<text x="8" y="16" font-family="sans-serif" font-size="12">{}</text>"#, escape(&data.title));
    }
    for (k, (f, g)) in data.pairs.iter().enumerate() {
        draw_line(&mut svg, &frame, &floats(f), "#555", "6 3", &format!("pair {k}: H1"));
        draw_line(&mut svg, &frame, &floats(g), "#555", "2 3", &format!("pair {k}: H2"));
    }
    if let Some(v) = &data.v {
        draw_subspace(&mut svg, &frame, v, "#000", "V");
    }
    if let Some(w) = &data.w {
        draw_subspace(&mut svg, &frame, w, "#c00", "W");
    }
    for (i, c) in coords.iter().enumerate() {
        let color = labels.as_ref().map_or("#333", |l| PALETTE[l[i] % PALETTE.len()]);
        let (x, y) = if c[2].abs() > 1e-12 { frame.screen(c[0] / c[2], c[1] / c[2]) } else { boundary(c[0], c[1]) };
        let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{color}"><title>x{i}</title></circle>"#);
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ProjPoint;
    use crate::scalar::ints;

    #[test]
    fn renders_points_and_infinity() {
        let mut x = PointConfig::from_affine_ints(2, &[vec![1, 1], vec![-1, 1], vec![0, -1]]).unwrap();
        x.points.push(ProjPoint::from_ints(&[1, 0, 0]).unwrap());
        let data = PlotData {
            points: Some(x),
            v: Some(LinSubspace::hyperplane_at_infinity(2)),
            w: Some(LinSubspace::span(3, &[ints(&[0, 0, 1])]).unwrap()),
            pairs: vec![(ints(&[1, 0, 0]), ints(&[0, 1, 0]))],
            partition: None,
            title: "a < b".into(),
        };
        let svg = render_svg(&data).unwrap();
        assert_eq!(svg.matches("<circle").count(), 2 + 4);
        assert!(svg.contains("a &lt; b"));
        assert_eq!(svg.matches("<line").count(), 2);
    }

    #[test]
    fn rejects_other_dimensions() {
        let data = PlotData { v: Some(LinSubspace::hyperplane_at_infinity(3)), ..Default::default() };
        assert!(render_svg(&data).is_err());
    }
}
