//! SVG pictures of scenes, traces and dark sectors.

use std::fmt::Write;

use crate::dark_sector::DarkSector;
use crate::geometry::Vec2;
use crate::scene::{EnclosingCircle, Scene};
use crate::tracer::{exit_ray, TraceResult};

const CANVAS: f64 = 800.0;
/// Half-width of the viewport in units of the radius of K.
const VIEW_SCALE: f64 = 3.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct TraceOverlay {
    pub points: Vec<Vec2>,
    /// Component the emission direction belongs to; `None` draws in grey.
    pub component: Option<usize>,
}

impl TraceOverlay {
    /// The trace's polyline, continued past K along the exit direction when it escaped.
    pub fn from_trace(tr: &TraceResult, component: Option<usize>, circle: &EnclosingCircle) -> Self {
        let mut points = tr.path.clone();
        if let Ok((q, dir)) = exit_ray(tr, circle) {
            points.push(q);
            points.push(q + Vec2::from_angle(dir) * (4.0 * VIEW_SCALE * circle.radius));
        }
        TraceOverlay { points, component }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overlays {
    pub circle: Option<EnclosingCircle>,
    pub traces: Vec<TraceOverlay>,
    pub sectors: Vec<DarkSector>,
}

#[derive(Debug, Clone, Copy)]
struct Viewport {
    lo: Vec2,
    hi: Vec2,
}

impl Viewport {
    fn around(circle: &EnclosingCircle) -> Self {
        let h = VIEW_SCALE * circle.radius;
        Viewport {
            lo: circle.center - Vec2::new(h, h),
            hi: circle.center + Vec2::new(h, h),
        }
    }

    fn scale(&self) -> f64 {
        CANVAS / (self.hi.x - self.lo.x)
    }

    fn map(&self, p: Vec2) -> (f64, f64) {
        let s = self.scale();
        ((p.x - self.lo.x) * s, (self.hi.y - p.y) * s)
    }

    fn diagonal(&self) -> f64 {
        self.lo.distance(self.hi)
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0.000".to_string()
    } else {
        s
    }
}

fn point(v: &Viewport, p: Vec2) -> String {
    let (x, y) = v.map(p);
    format!("{},{}", num(x), num(y))
}

/// Sutherland–Hodgman clip of a polygon to an axis-aligned box.
fn clip_to_box(poly: &[Vec2], lo: Vec2, hi: Vec2) -> Vec<Vec2> {
    // signed distance to the inside of each boundary
    let edges: [fn(Vec2, Vec2, Vec2) -> f64; 4] = [
        |p, lo, _| p.x - lo.x,
        |p, _, hi| hi.x - p.x,
        |p, lo, _| p.y - lo.y,
        |p, _, hi| hi.y - p.y,
    ];
    let mut out = poly.to_vec();
    for inside in edges {
        if out.is_empty() {
            break;
        }
        let input = std::mem::take(&mut out);
        for i in 0..input.len() {
            let cur = input[i];
            let prev = input[(i + input.len() - 1) % input.len()];
            let (dc, dp) = (inside(cur, lo, hi), inside(prev, lo, hi));
            if dc >= 0.0 {
                if dp < 0.0 {
                    out.push(prev + (cur - prev) * (dp / (dp - dc)));
                }
                out.push(cur);
            } else if dp >= 0.0 {
                out.push(prev + (cur - prev) * (dp / (dp - dc)));
            }
        }
    }
    out
}

/// A polygon covering the part of `s` within `reach` of its apex.
fn sector_polygon(s: &DarkSector, reach: f64) -> Vec<Vec2> {
    const STEPS: usize = 32;
    let span = s.angle();
    let mut poly = vec![s.apex];
    for i in 0..=STEPS {
        let a = s.dir_lo + span * i as f64 / STEPS as f64;
        poly.push(s.apex + Vec2::from_angle(a) * reach);
    }
    poly
}

fn on_boundary(p: Vec2, v: &Viewport) -> [bool; 4] {
    let tol = 1e-9 * v.diagonal();
    [
        (p.x - v.lo.x).abs() < tol,
        (p.x - v.hi.x).abs() < tol,
        (p.y - v.lo.y).abs() < tol,
        (p.y - v.hi.y).abs() < tol,
    ]
}

pub fn render_svg(scene: &Scene, overlays: &Overlays) -> String {
    let circle = overlays.circle.unwrap_or_else(|| scene.enclosing_circle());
    let v = Viewport::around(&circle);
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{c}" height="{c}" viewBox="0 0 {c} {c}">"#,
        c = CANVAS
    );
    let _ = writeln!(
        svg,
        r##"<rect x="0" y="0" width="{c}" height="{c}" fill="#ffffff"/>"##,
        c = CANVAS
    );

    let _ = writeln!(svg, r#"<g id="sectors">"#);
    for s in &overlays.sectors {
        let reach = 2.0 * (s.apex.distance(circle.center) + v.diagonal());
        let clipped = clip_to_box(&sector_polygon(s, reach), v.lo, v.hi);
        if clipped.len() < 3 {
            continue;
        }
        let pts: Vec<String> = clipped.iter().map(|&p| point(&v, p)).collect();
        let _ = writeln!(
            svg,
            r##"<polygon class="sector" points="{}" fill="#404040" fill-opacity="0.25" stroke="none"/>"##,
            pts.join(" ")
        );
        for i in 0..clipped.len() {
            let a = clipped[i];
            let b = clipped[(i + 1) % clipped.len()];
            let shared = on_boundary(a, &v).iter().zip(on_boundary(b, &v)).any(|(x, y)| *x && y);
            if shared {
                let _ = writeln!(
                    svg,
                    r##"<path class="truncation" d="M {} L {}" stroke="#404040" stroke-width="1.5" stroke-dasharray="6 4" fill="none"/>"##,
                    point(&v, a),
                    point(&v, b)
                );
            }
        }
    }
    let _ = writeln!(svg, "</g>");

    let (cx, cy) = v.map(circle.center);
    let _ = writeln!(
        svg,
        r##"<circle class="enclosing" cx="{}" cy="{}" r="{}" fill="none" stroke="#999999" stroke-width="1"/>"##,
        num(cx),
        num(cy),
        num(circle.radius * v.scale())
    );

    let _ = writeln!(svg, r#"<g id="traces">"#);
    for t in &overlays.traces {
        if t.points.len() < 2 {
            continue;
        }
        let color = t.component.map_or("#b0b0b0", |c| PALETTE[c % PALETTE.len()]);
        let pts: Vec<String> = t.points.iter().map(|&p| point(&v, p)).collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="trace" points="{}" fill="none" stroke="{}" stroke-width="1"/>"#,
            pts.join(" "),
            color
        );
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r#"<g id="mirrors">"#);
    for (i, m) in scene.mirrors.iter().enumerate() {
        let (a, b) = m.endpoints();
        let _ = writeln!(
            svg,
            r##"<path class="mirror" id="mirror-{}" d="M {} L {}" stroke="#000000" stroke-width="3" stroke-linecap="round"/>"##,
            i + 1,
            point(&v, a),
            point(&v, b)
        );
    }
    let _ = writeln!(svg, "</g>");

    let (sx, sy) = v.map(scene.source);
    let _ = writeln!(
        svg,
        r##"<circle class="source" cx="{}" cy="{}" r="5" fill="#ffcc00" stroke="#000000" stroke-width="1"/>"##,
        num(sx),
        num(sy)
    );
    let _ = writeln!(svg, "</svg>");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::Arc;
    use crate::dark_sector::{build_sector, DarkArc};
    use crate::exact_angle::RationalTurn;
    use crate::scene::Mirror;
    use crate::tracer::trace;
    use std::f64::consts::PI;

    fn toy() -> Scene {
        Scene::new(
            vec![
                Mirror::new(Vec2::new(0.2, 0.0), 1.0, RationalTurn::zero()),
                Mirror::new(Vec2::new(0.0, 0.2), 1.0, RationalTurn::new(1, 2).unwrap()),
            ],
            Vec2::new(0.3, 0.7),
        )
    }

    #[test]
    fn bare_scene_elements() {
        let svg = render_svg(&toy(), &Overlays::default());
        assert_eq!(svg.matches(r#"class="mirror""#).count(), 2);
        assert_eq!(svg.matches(r#"class="source""#).count(), 1);
        assert_eq!(svg.matches(r#"class="sector""#).count(), 0);
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn sector_is_shaded_and_truncated() {
        let scene = Scene::new(
            vec![Mirror::new(Vec2::new(-1.0, 0.0), 2.0, RationalTurn::zero())],
            Vec2::new(0.0, 1.0),
        );
        let k = EnclosingCircle::new(Vec2::new(0.0, 0.5), 2.0);
        let arc = DarkArc::from_unlit(Arc::new(1.25 * PI, 1.75 * PI), 0);
        let s = build_sector(&arc, &k).unwrap();
        let overlays = Overlays {
            circle: Some(k),
            traces: vec![TraceOverlay::from_trace(&trace(&scene, 0.3, 100), Some(0), &k)],
            sectors: vec![s],
        };
        let svg = render_svg(&scene, &overlays);
        assert_eq!(svg.matches(r#"class="sector""#).count(), 1);
        assert!(svg.matches(r#"class="truncation""#).count() >= 1);
        assert_eq!(svg.matches(r#"class="trace""#).count(), 1);
        assert_eq!(svg, render_svg(&scene, &overlays));
    }

    #[test]
    fn clipping_keeps_interior_polygons() {
        let lo = Vec2::new(0.0, 0.0);
        let hi = Vec2::new(1.0, 1.0);
        let tri = [Vec2::new(0.2, 0.2), Vec2::new(0.8, 0.2), Vec2::new(0.5, 0.8)];
        assert_eq!(clip_to_box(&tri, lo, hi), tri.to_vec());
        let big = [Vec2::new(-1.0, -1.0), Vec2::new(3.0, -1.0), Vec2::new(-1.0, 3.0)];
        let c = clip_to_box(&big, lo, hi);
        let area: f64 = (0..c.len()).map(|i| c[i].cross(c[(i + 1) % c.len()])).sum::<f64>() * 0.5;
        assert!((area - 1.0).abs() < 1e-12);
        let outside = [Vec2::new(2.0, 2.0), Vec2::new(3.0, 2.0), Vec2::new(2.0, 3.0)];
        assert!(clip_to_box(&outside, lo, hi).is_empty());
    }

    #[test]
    fn negative_zero_is_not_printed() {
        assert_eq!(num(-0.0001), "0.000");
        assert_eq!(num(-1.25), "-1.250");
    }
}
