//! Deterministic SVG pictures of the circular and annular models.
//!
//! Conventions: circle nodes run clockwise from twelve o'clock in layout
//! order; annulus outer nodes run clockwise, inner nodes counterclockwise.
//! Every block becomes one hull element (a polygon through its nodes in
//! circular order, a lone disc for singletons, and a star polygon threaded
//! through the canvas center for the zero block), and every hull carries
//! `data-block`, `data-kind`, and `data-labels` attributes so a figure can
//! be checked against its model mechanically.  Output is a pure function of
//! the model and the spec: rendering twice is byte-identical.

use std::fmt::Write as _;

use crate::fuss::{AnnularModel, FussModel};
use crate::group::{GroupContext, Point};
use crate::model::{CircleLayout, SymPartition};
use crate::parking::ParkingFunction;
use crate::{Error, Result};

/// Sizes and colors for the pictures.  All lengths are in user units and
/// must be positive.
#[derive(Debug, Clone)]
pub struct RenderSpec {
    pub radius: f64,
    pub font_size: f64,
    pub hull_fill: String,
    pub label_color: String,
    pub inner_radius: f64,
    pub outer_radius: f64,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            radius: 180.0,
            font_size: 12.0,
            hull_fill: "#a8c6e8".to_string(),
            label_color: "#1d4ed8".to_string(),
            inner_radius: 75.0,
            outer_radius: 180.0,
        }
    }
}

impl RenderSpec {
    pub fn validate(&self) -> Result<()> {
        let lengths =
            [self.radius, self.font_size, self.inner_radius, self.outer_radius];
        if lengths.iter().any(|&v| !v.is_finite() || v <= 0.0) {
            return Err(Error::InvalidParameters("render lengths must be positive".into()));
        }
        if self.inner_radius >= self.outer_radius {
            return Err(Error::InvalidParameters(
                "the annulus needs inner radius < outer radius".into(),
            ));
        }
        Ok(())
    }
}

/// Fixed-precision coordinate text; negative zero is normalized away so
/// equal positions always print identically.
fn fx(v: f64) -> String {
    let v = if v.abs() < 5e-5 { 0.0 } else { v };
    format!("{v:.4}")
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn point_name(p: Point) -> String {
    format!("{}.{}", p.0 + 1, p.1 + 1)
}

fn label_text(label: &[Point]) -> String {
    let mut sorted = label.to_vec();
    sorted.sort_unstable();
    sorted.iter().map(|&p| point_name(p)).collect::<Vec<_>>().join(",")
}

/// Point on a ring: `frac` winds clockwise from twelve o'clock when
/// `clockwise`, counterclockwise otherwise.
fn ring_xy(cx: f64, cy: f64, r: f64, frac: f64, clockwise: bool) -> (f64, f64) {
    let theta = if clockwise {
        std::f64::consts::FRAC_PI_2 - std::f64::consts::TAU * frac
    } else {
        std::f64::consts::FRAC_PI_2 + std::f64::consts::TAU * frac
    };
    (cx + r * theta.cos(), cy - r * theta.sin())
}

struct Svg {
    body: String,
    side: f64,
}

impl Svg {
    fn new(side: f64) -> Self {
        Svg { body: String::new(), side }
    }

    fn ring(&mut self, cx: f64, cy: f64, r: f64) {
        let _ = writeln!(
            self.body,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#d4d4d4\" stroke-width=\"1\"/>",
            fx(cx), fx(cy), fx(r)
        );
    }

    fn hull(
        &mut self,
        idx: usize,
        kind: &str,
        labels: &str,
        vertices: &[(f64, f64)],
        fill: &str,
    ) {
        let attrs = format!(
            "class=\"hull\" data-block=\"{idx}\" data-kind=\"{kind}\" data-labels=\"{}\"",
            esc(labels)
        );
        if vertices.len() == 1 {
            let _ = writeln!(
                self.body,
                "<circle {attrs} cx=\"{}\" cy=\"{}\" r=\"9\" fill=\"{}\" fill-opacity=\"0.55\" stroke=\"{}\" stroke-width=\"2\"/>",
                fx(vertices[0].0), fx(vertices[0].1), esc(fill), esc(fill)
            );
        } else {
            let pts = vertices
                .iter()
                .map(|&(x, y)| format!("{},{}", fx(x), fx(y)))
                .collect::<Vec<_>>()
                .join(" ");
            let _ = writeln!(
                self.body,
                "<polygon {attrs} points=\"{pts}\" fill=\"{}\" fill-opacity=\"0.55\" stroke=\"{}\" stroke-width=\"2.5\" stroke-linejoin=\"round\"/>",
                esc(fill), esc(fill)
            );
        }
    }

    fn node(&mut self, p: Point, x: f64, y: f64, r: f64) {
        let _ = writeln!(
            self.body,
            "<circle class=\"node\" data-point=\"{}\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#111111\"/>",
            point_name(p), fx(x), fx(y), fx(r)
        );
    }

    fn text(&mut self, class: &str, s: &str, x: f64, y: f64, size: f64, color: &str) {
        let _ = writeln!(
            self.body,
            "<text class=\"{class}\" x=\"{}\" y=\"{}\" font-size=\"{}\" font-family=\"sans-serif\" text-anchor=\"middle\" dominant-baseline=\"middle\" fill=\"{}\">{}</text>",
            fx(x), fx(y), fx(size), esc(color), esc(s)
        );
    }

    fn finish(self) -> String {
        let side = fx(self.side);
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{side}\" height=\"{side}\" viewBox=\"0 0 {side} {side}\">\n<rect width=\"{side}\" height=\"{side}\" fill=\"#ffffff\"/>\n{}</svg>\n",
            self.body
        )
    }
}

/// Block classification shared by both pictures: the zero block is the
/// color-closed one (never at d = 1), blocks touching the distinguished
/// boundary nodes are named by the caller.
fn color_closed(d: usize, block: &[Point]) -> bool {
    if d < 2 {
        return false;
    }
    let set: std::collections::BTreeSet<Point> = block.iter().copied().collect();
    set.iter().all(|&(a, b)| set.contains(&(a, (b + 1) % d)))
}

fn circle_core(
    d: usize,
    m: usize,
    center: bool,
    items: &[(Vec<Point>, Vec<Point>)],
    spec: &RenderSpec,
) -> Result<String> {
    spec.validate()?;
    let layout = CircleLayout::new(d, m);
    let total = d * m;
    let pad = spec.font_size * 3.0 + 14.0;
    let side = 2.0 * (spec.radius + pad);
    let (cx, cy) = (side / 2.0, side / 2.0);
    let center_orbit = spec.radius * 0.12;

    let xy = |p: Point| -> (f64, f64) {
        if center && p.0 == m {
            ring_xy(cx, cy, center_orbit, p.1 as f64 / d as f64, true)
        } else {
            ring_xy(cx, cy, spec.radius, layout.pos(p) as f64 / total as f64, true)
        }
    };

    let mut svg = Svg::new(side);
    svg.ring(cx, cy, spec.radius);

    for (idx, (block, label)) in items.iter().enumerate() {
        let mut rim: Vec<Point> = block.iter().copied().filter(|&(a, _)| a < m).collect();
        rim.sort_by_key(|&p| layout.pos(p));
        let mut middle: Vec<Point> =
            block.iter().copied().filter(|&(a, _)| a >= m).collect();
        middle.sort_unstable();

        let closed = color_closed(d, block);
        let kind = if closed && !rim.is_empty() {
            "zero"
        } else if !middle.is_empty() {
            "center"
        } else {
            "plain"
        };

        let mut vertices: Vec<(f64, f64)> = Vec::new();
        if kind == "zero" {
            for &p in &rim {
                vertices.push(xy(p));
                vertices.push((cx, cy));
            }
        } else {
            vertices.extend(rim.iter().map(|&p| xy(p)));
            vertices.extend(middle.iter().map(|&p| xy(p)));
        }
        svg.hull(idx, kind, &label_text(label), &vertices, &spec.hull_fill);
    }

    for (idx, (block, label)) in items.iter().enumerate() {
        if label.is_empty() {
            continue;
        }
        let coords: Vec<(f64, f64)> = block.iter().map(|&p| xy(p)).collect();
        let (sx, sy) = coords
            .iter()
            .fold((0.0, 0.0), |acc, &(x, y)| (acc.0 + x, acc.1 + y));
        let n = coords.len() as f64;
        let (mut lx, mut ly) = (sx / n, sy / n);
        if block.len() == 1 {
            // pull a singleton's label inward so it clears the node name
            lx = cx + (lx - cx) * 0.82;
            ly = cy + (ly - cy) * 0.82;
        }
        let _ = idx;
        svg.text("label", &label_text(label), lx, ly, spec.font_size, &spec.label_color);
    }

    for (block, _) in items {
        for &p in block {
            let (x, y) = xy(p);
            svg.node(p, x, y, spec.font_size / 3.5);
            let (nx, ny) = if center && p.0 == m {
                ring_xy(
                    cx,
                    cy,
                    center_orbit + spec.font_size * 1.1,
                    p.1 as f64 / d as f64,
                    true,
                )
            } else {
                ring_xy(
                    cx,
                    cy,
                    spec.radius + spec.font_size * 1.4,
                    layout.pos(p) as f64 / total as f64,
                    true,
                )
            };
            svg.text("name", &point_name(p), nx, ny, spec.font_size * 0.85, "#444444");
        }
    }

    Ok(svg.finish())
}

/// Picture of a parking function: its d-symmetric partition with each
/// block's label set printed at the hull.
pub fn svg_circle(ctx: &GroupContext, pf: &ParkingFunction, spec: &RenderSpec) -> Result<String> {
    let model = pf.model(ctx)?;
    let items = pf.labels(ctx)?;
    circle_core(model.d, model.m, model.center, &items, spec)
}

/// Picture of a bare partition, no labels.
pub fn svg_partition(p: &SymPartition, spec: &RenderSpec) -> Result<String> {
    let items: Vec<(Vec<Point>, Vec<Point>)> =
        p.blocks().iter().map(|b| (b.clone(), Vec::new())).collect();
    circle_core(p.d, p.m, p.center, &items, spec)
}

/// Picture of a labeled k-divisible model, as produced for chained parking
/// functions.
pub fn svg_labeled(model: &FussModel, spec: &RenderSpec) -> Result<String> {
    let p = &model.partition;
    if model.labels.len() != p.blocks().len() {
        return Err(Error::InvalidParameters("one label set per block, please".into()));
    }
    let items: Vec<(Vec<Point>, Vec<Point>)> = p
        .blocks()
        .iter()
        .cloned()
        .zip(model.labels.iter().cloned())
        .collect();
    circle_core(p.d, p.m, p.center, &items, spec)
}

/// Picture of a labeled annular model: outer nodes clockwise on the outer
/// ring, inner nodes counterclockwise on the inner ring, one hull per
/// block.
pub fn svg_annulus(
    ctx: &GroupContext,
    k: usize,
    model: &AnnularModel,
    spec: &RenderSpec,
) -> Result<String> {
    spec.validate()?;
    let ap = &model.partition;
    if ap.d != ctx.d || ap.n != ctx.n || ap.k != k {
        return Err(Error::InvalidParameters(
            "annular model does not match the context".into(),
        ));
    }
    if model.labels.len() != ap.blocks().len() {
        return Err(Error::InvalidParameters("one label set per block, please".into()));
    }
    let d = ap.d;
    let base = ap.inner_base();
    let outer_layout = CircleLayout::new(d, base);
    let outer_total = d * base;
    let inner_total = d * (ap.k * ap.n - base);

    let pad = spec.font_size * 3.0 + 14.0;
    let side = 2.0 * (spec.outer_radius + pad);
    let (cx, cy) = (side / 2.0, side / 2.0);

    let inner_pos = |p: Point| -> usize { p.1 * ap.k + (p.0 - base) };
    let xy = |p: Point| -> (f64, f64) {
        if p.0 < base {
            let frac = outer_layout.pos(p) as f64 / outer_total as f64;
            ring_xy(cx, cy, spec.outer_radius, frac, true)
        } else {
            let frac = inner_pos(p) as f64 / inner_total as f64;
            ring_xy(cx, cy, spec.inner_radius, frac, false)
        }
    };

    let mut svg = Svg::new(side);
    svg.ring(cx, cy, spec.outer_radius);
    svg.ring(cx, cy, spec.inner_radius);

    let zero = ap.zero_block();
    for (idx, block) in ap.blocks().iter().enumerate() {
        let mut outer: Vec<Point> = block.iter().copied().filter(|&(a, _)| a < base).collect();
        outer.sort_by_key(|&p| outer_layout.pos(p));
        let mut inner: Vec<Point> = block.iter().copied().filter(|&(a, _)| a >= base).collect();
        inner.sort_by_key(|&p| inner_pos(p));

        let kind = if zero == Some(idx) {
            "zero"
        } else if !inner.is_empty() && !outer.is_empty() {
            "annular"
        } else if !inner.is_empty() {
            "inner"
        } else {
            "outer"
        };

        // walk the outer arc clockwise and come back along the inner ring, so
        // a block touching both boundaries closes into one sector-like hull
        let mut vertices: Vec<(f64, f64)> = outer.iter().map(|&p| xy(p)).collect();
        vertices.extend(inner.iter().rev().map(|&p| xy(p)));
        svg.hull(idx, kind, &label_text(&model.labels[idx]), &vertices, &spec.hull_fill);
    }

    for (idx, block) in ap.blocks().iter().enumerate() {
        let label = &model.labels[idx];
        if label.is_empty() {
            continue;
        }
        let coords: Vec<(f64, f64)> = block.iter().map(|&p| xy(p)).collect();
        let (sx, sy) = coords
            .iter()
            .fold((0.0, 0.0), |acc, &(x, y)| (acc.0 + x, acc.1 + y));
        let n = coords.len() as f64;
        svg.text("label", &label_text(label), sx / n, sy / n, spec.font_size, &spec.label_color);
    }

    for block in ap.blocks() {
        for &p in block {
            let (x, y) = xy(p);
            svg.node(p, x, y, spec.font_size / 3.5);
            let (nx, ny) = if p.0 < base {
                let frac = outer_layout.pos(p) as f64 / outer_total as f64;
                ring_xy(cx, cy, spec.outer_radius + spec.font_size * 1.4, frac, true)
            } else {
                let frac = inner_pos(p) as f64 / inner_total as f64;
                ring_xy(cx, cy, spec.inner_radius - spec.font_size * 1.4, frac, false)
            };
            svg.text("name", &point_name(p), nx, ny, spec.font_size * 0.85, "#444444");
        }
    }

    Ok(svg.finish())
}
