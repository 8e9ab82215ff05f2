//! Hand-written DOT and SVG output.

use std::fmt::Write;

use gcs_core::exec::Solution;
use gcs_core::geom::{LineRep, Placement, Point2};
use gcs_core::graph::{ConstraintGraph, EntityKind};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 0.05;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// One node per entity (shape by kind), one edge per constraint.
pub fn dot(g: &ConstraintGraph) -> String {
    let mut out = String::from("graph constraints {\n");
    for e in g.entities() {
        let shape = match e.kind {
            EntityKind::Point => "circle",
            EntityKind::Line => "box",
            EntityKind::Circle { .. } => "doublecircle",
        };
        let _ = writeln!(out, "  {} [shape={shape}];", quote(&e.id));
    }
    for c in g.constraints() {
        let label = match c.kind.value() {
            Some(v) => format!("{} {v}", c.kind.name()),
            None => c.kind.name().to_string(),
        };
        let _ = writeln!(
            out,
            "  {} -- {} [label={}];",
            quote(&c.between.0),
            quote(&c.between.1),
            quote(&label)
        );
    }
    out.push('}');
    out
}

/// World-to-viewport mapping fitted to the solution's geometry.
struct View {
    min: Point2,
    scale: f64,
    offset: Point2,
}

impl View {
    fn fit(s: &Solution) -> View {
        let mut pts: Vec<Point2> = Vec::new();
        for p in s.placements.values() {
            match p {
                Placement::Point(q) => pts.push(*q),
                Placement::Circle(k) => {
                    pts.push(k.center - Point2::new(k.r, k.r));
                    pts.push(k.center + Point2::new(k.r, k.r));
                }
                Placement::Line(_) => {}
            }
        }
        if pts.is_empty() {
            // Lines only: frame their feet from the origin.
            pts.extend(
                s.placements
                    .values()
                    .filter_map(|p| p.as_line())
                    .map(|l| l.foot(Point2::ORIGIN)),
            );
        }
        let (mut lo, mut hi) = (
            Point2::new(f64::MAX, f64::MAX),
            Point2::new(f64::MIN, f64::MIN),
        );
        for p in &pts {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if pts.is_empty() {
            lo = Point2::new(-1.0, -1.0);
            hi = Point2::new(1.0, 1.0);
        }
        let w = (hi.x - lo.x).max(1e-9);
        let h = (hi.y - lo.y).max(1e-9);
        let (inner_w, inner_h) = (WIDTH * (1.0 - 2.0 * MARGIN), HEIGHT * (1.0 - 2.0 * MARGIN));
        let scale = (inner_w / w).min(inner_h / h);
        let offset = Point2::new(
            WIDTH * MARGIN + 0.5 * (inner_w - scale * w),
            HEIGHT * MARGIN + 0.5 * (inner_h - scale * h),
        );
        View {
            min: lo,
            scale,
            offset,
        }
    }

    fn map(&self, p: Point2) -> Point2 {
        Point2::new(
            self.offset.x + self.scale * (p.x - self.min.x),
            HEIGHT - (self.offset.y + self.scale * (p.y - self.min.y)),
        )
    }

    fn unmap(&self, q: Point2) -> Point2 {
        Point2::new(
            self.min.x + (q.x - self.offset.x) / self.scale,
            self.min.y + (HEIGHT - q.y - self.offset.y) / self.scale,
        )
    }

    /// The part of `l` inside the viewport, in viewport coordinates.
    fn clip(&self, l: &LineRep) -> Option<(Point2, Point2)> {
        let lo = self.unmap(Point2::new(0.0, HEIGHT));
        let hi = self.unmap(Point2::new(WIDTH, 0.0));
        let base = l.foot(0.5 * (lo + hi));
        let d = l.direction();
        let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
        for (b, dir, min, max) in [(base.x, d.x, lo.x, hi.x), (base.y, d.y, lo.y, hi.y)] {
            if dir.abs() < 1e-12 {
                if b < min || b > max {
                    return None;
                }
                continue;
            }
            let (a, c) = ((min - b) / dir, (max - b) / dir);
            t0 = t0.max(a.min(c));
            t1 = t1.min(a.max(c));
        }
        (t0 < t1).then(|| (self.map(base + t0 * d), self.map(base + t1 * d)))
    }
}

/// Points as labelled dots, lines and circles drawn from their placements.
pub fn svg(g: &ConstraintGraph, s: &Solution) -> String {
    let view = View::fit(s);
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" width=\"{WIDTH}\" height=\"{HEIGHT}\">\n"
    );
    out.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    let ordered = g
        .entities()
        .iter()
        .filter_map(|e| s.placements.get(&e.id).map(|p| (e, p)));
    let mut labels = String::new();
    for (e, p) in ordered {
        let id = escape_xml(&e.id);
        match p {
            Placement::Line(l) => {
                if let Some((a, b)) = view.clip(l) {
                    let _ = writeln!(
                        out,
                        "  <line class=\"line\" id=\"{id}\" x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"steelblue\"/>",
                        a.x, a.y, b.x, b.y
                    );
                }
            }
            Placement::Circle(k) => {
                let c = view.map(k.center);
                let _ = writeln!(
                    out,
                    "  <circle class=\"circle\" id=\"{id}\" cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"darkgreen\"/>",
                    c.x,
                    c.y,
                    k.r * view.scale
                );
            }
            Placement::Point(q) => {
                let c = view.map(*q);
                let _ = writeln!(
                    labels,
                    "  <circle class=\"point\" id=\"{id}\" cx=\"{:.3}\" cy=\"{:.3}\" r=\"4\" fill=\"black\"/>\n  <text x=\"{:.3}\" y=\"{:.3}\" font-size=\"14\">{id}</text>",
                    c.x,
                    c.y,
                    c.x + 6.0,
                    c.y - 6.0
                );
            }
        }
    }
    out.push_str(&labels);
    out.push_str("</svg>");
    out
}
