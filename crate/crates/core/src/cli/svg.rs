use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::geometry::OrientedLine;
use crate::norm::Point;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
const CANVAS: f64 = 600.0;
const PAD: f64 = 20.0;

/// A named set of point glyphs drawn in one colour.
#[derive(Debug, Clone, Default)]
pub struct Layer {
    pub name: String,
    pub points: Vec<Point>,
}

/// A polyline; `closed` draws it as a polygon outline.
#[derive(Debug, Clone, Default)]
pub struct Curve {
    pub class: String,
    pub points: Vec<Point>,
    pub closed: bool,
}

#[derive(Debug, Clone, Default)]
pub struct Scene {
    pub layers: Vec<Layer>,
    pub hulls: Vec<Vec<Point>>,
    pub curves: Vec<Curve>,
    pub lines: Vec<OrientedLine>,
}

struct View {
    min: Point,
    max: Point,
    scale: f64,
}

impl View {
    fn fit(scene: &Scene) -> Option<Self> {
        let all = scene
            .layers
            .iter()
            .flat_map(|l| &l.points)
            .chain(scene.hulls.iter().flatten())
            .chain(scene.curves.iter().flat_map(|c| &c.points));
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in all {
            min = Point::new(min.x.min(p.x), min.y.min(p.y));
            max = Point::new(max.x.max(p.x), max.y.max(p.y));
        }
        if !min.x.is_finite() {
            return None;
        }
        let span = (max.x - min.x).max(max.y - min.y).max(1e-9);
        let margin = 0.05 * span;
        min = min - Point::new(margin, margin);
        max += Point::new(margin, margin);
        Some(Self {
            min,
            max,
            scale: CANVAS / (span + 2.0 * margin),
        })
    }

    fn size(&self) -> (f64, f64) {
        (
            (self.max.x - self.min.x) * self.scale + 2.0 * PAD,
            (self.max.y - self.min.y) * self.scale + 2.0 * PAD,
        )
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (
            (p.x - self.min.x) * self.scale + PAD,
            (self.max.y - p.y) * self.scale + PAD,
        )
    }

    /// The part of `line` inside the data box.
    fn clip(&self, line: &OrientedLine) -> Option<(Point, Point)> {
        let (o, d) = (line.anchor, line.direction);
        let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
        for (o, d, lo, hi) in [(o.x, d.x, self.min.x, self.max.x), (o.y, d.y, self.min.y, self.max.y)] {
            if d.abs() < 1e-300 {
                if o < lo || o > hi {
                    return None;
                }
            } else {
                let (a, b) = ((lo - o) / d, (hi - o) / d);
                t0 = t0.max(a.min(b));
                t1 = t1.min(a.max(b));
            }
        }
        (t0 < t1).then(|| (o + d * t0, o + d * t1))
    }
}

fn coords(view: &View, pts: &[Point]) -> String {
    let mut s = String::new();
    for (i, &p) in pts.iter().enumerate() {
        let (x, y) = view.map(p);
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{x:.3},{y:.3}");
    }
    s
}

/// Standalone SVG text for the scene; the viewport is fitted to the data.
pub fn render_svg(scene: &Scene) -> String {
    let Some(view) = View::fit(scene) else {
        return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"100\" height=\"100\" viewBox=\"0 0 100 100\"></svg>\n".into();
    };
    let (w, h) = view.size();
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.3} {h:.3}\">"
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    for hull in &scene.hulls {
        let _ = writeln!(
            s,
            "<polygon class=\"hull\" points=\"{}\" fill=\"none\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>",
            coords(&view, hull)
        );
    }
    for c in &scene.curves {
        let tag = if c.closed { "polygon" } else { "polyline" };
        let _ = writeln!(
            s,
            "<{tag} class=\"{}\" points=\"{}\" fill=\"none\" stroke=\"#444\"/>",
            c.class,
            coords(&view, &c.points)
        );
    }
    for line in &scene.lines {
        if let Some((a, b)) = view.clip(line) {
            let ((x1, y1), (x2, y2)) = (view.map(a), view.map(b));
            let _ = writeln!(
                s,
                "<line class=\"line\" x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"black\"/>"
            );
        }
    }
    for (i, layer) in scene.layers.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let _ = writeln!(s, "<g class=\"points\" id=\"{}\" fill=\"{colour}\">", layer.name);
        for &p in &layer.points {
            let (x, y) = view.map(p);
            let _ = writeln!(s, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3\"/>");
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

pub fn emit_svg(scene: &Scene, path: &Path) -> io::Result<()> {
    std::fs::write(path, render_svg(scene))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_scene() {
        let s = render_svg(&Scene::default());
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(!s.contains("<circle"));
    }

    #[test]
    fn line_spans_viewport() {
        let scene = Scene {
            layers: vec![Layer {
                name: "a".into(),
                points: vec![Point::new(0.0, 0.0), Point::new(10.0, 10.0)],
            }],
            lines: vec![OrientedLine::through(Point::new(5.0, 0.0), Point::new(5.0, 1.0))],
            ..Scene::default()
        };
        let view = View::fit(&scene).unwrap();
        let (a, b) = view.clip(&scene.lines[0]).unwrap();
        assert!((a.y - view.min.y).abs() < 1e-9 && (b.y - view.max.y).abs() < 1e-9);
        let s = render_svg(&scene);
        assert_eq!(s.matches("<line").count(), 1);
        assert_eq!(s.matches("<circle").count(), 2);
    }

    #[test]
    fn written_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scene.svg");
        emit_svg(&Scene::default(), &path).unwrap();
        assert!(std::fs::read_to_string(path).unwrap().contains("<svg"));
    }
}
