//! Mirror configurations: two-sided segment mirrors with rational line
//! angles, a light source, validation, and the enclosing circle.

mod generate;
mod io;

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::exact_angle::{GroupElement, RationalTurn};
use crate::geometry::{point_segment_distance, segment_segment_distance, Vec2};

pub use generate::{random_scene, RandomSceneParams};
pub use io::{load_scene, save_scene, MirrorDocument, SceneDocument, SceneError};

/// Minimum clearance between mirrors, and between the source and any mirror.
pub const MIN_CLEARANCE: f64 = 1e-9;

/// Default ratio between the enclosing radius and the farthest scene point.
pub const DEFAULT_CIRCLE_MARGIN: f64 = 1.25;

/// A two-sided mirror: the segment from `anchor` of the given length along
/// the direction `angle·π`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mirror {
    pub anchor: Vec2,
    pub length: f64,
    pub angle: RationalTurn,
}

impl Mirror {
    pub fn new(anchor: Vec2, length: f64, angle: RationalTurn) -> Self {
        Mirror { anchor, length, angle }
    }

    /// Unit vector along the mirror. Axis-aligned and diagonal angles are exact.
    pub fn direction(&self) -> Vec2 {
        let h = FRAC_1_SQRT_2;
        match (self.angle.num().to_i64(), self.angle.den().to_i64()) {
            (Some(0), Some(1)) => Vec2::new(1.0, 0.0),
            (Some(1), Some(1)) => Vec2::new(-1.0, 0.0),
            (Some(1), Some(2)) => Vec2::new(0.0, 1.0),
            (Some(3), Some(2)) => Vec2::new(0.0, -1.0),
            (Some(1), Some(4)) => Vec2::new(h, h),
            (Some(3), Some(4)) => Vec2::new(-h, h),
            (Some(5), Some(4)) => Vec2::new(-h, -h),
            (Some(7), Some(4)) => Vec2::new(h, -h),
            _ => Vec2::from_angle(self.angle.radians()),
        }
    }

    /// Left normal of the mirror direction.
    pub fn normal(&self) -> Vec2 {
        let d = self.direction();
        Vec2::new(-d.y, d.x)
    }

    pub fn endpoints(&self) -> (Vec2, Vec2) {
        (self.anchor, self.anchor + self.direction() * self.length)
    }

    /// The reflection this mirror induces on directions.
    pub fn reflection(&self) -> GroupElement {
        GroupElement::mirror_reflection(&self.angle)
    }

    pub fn distance_to_point(&self, p: Vec2) -> f64 {
        let (a, b) = self.endpoints();
        point_segment_distance(p, a, b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub mirrors: Vec<Mirror>,
    pub source: Vec2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationCode {
    EmptyScene,
    NonPositiveLength,
    NonFiniteCoordinate,
    MirrorsIntersect,
    SourceOnMirror,
}

impl ViolationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationCode::EmptyScene => "empty-scene",
            ViolationCode::NonPositiveLength => "non-positive-length",
            ViolationCode::NonFiniteCoordinate => "non-finite-coordinate",
            ViolationCode::MirrorsIntersect => "mirrors-intersect",
            ViolationCode::SourceOnMirror => "source-on-mirror",
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One problem found by [`Scene::validate`]. Mirror indices are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Violation {
    pub code: ViolationCode,
    pub mirrors: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn has(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }
}

impl Scene {
    pub fn new(mirrors: Vec<Mirror>, source: Vec2) -> Self {
        Scene { mirrors, source }
    }

    pub fn mirror_angles(&self) -> impl Iterator<Item = &RationalTurn> {
        self.mirrors.iter().map(|m| &m.angle)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.mirrors.is_empty() {
            violations.push(Violation {
                code: ViolationCode::EmptyScene,
                mirrors: vec![],
                detail: "scene has no mirrors".into(),
            });
        }
        if !self.source.is_finite() {
            violations.push(Violation {
                code: ViolationCode::NonFiniteCoordinate,
                mirrors: vec![],
                detail: "source position is not finite".into(),
            });
        }
        let mut usable = vec![true; self.mirrors.len()];
        for (i, m) in self.mirrors.iter().enumerate() {
            if !m.anchor.is_finite() || !m.length.is_finite() {
                usable[i] = false;
                violations.push(Violation {
                    code: ViolationCode::NonFiniteCoordinate,
                    mirrors: vec![i + 1],
                    detail: format!("mirror {} has a non-finite coordinate", i + 1),
                });
            } else if m.length <= 0.0 {
                usable[i] = false;
                violations.push(Violation {
                    code: ViolationCode::NonPositiveLength,
                    mirrors: vec![i + 1],
                    detail: format!("mirror {} has length {}", i + 1, m.length),
                });
            }
        }
        for i in 0..self.mirrors.len() {
            if !usable[i] {
                continue;
            }
            let (a, b) = self.mirrors[i].endpoints();
            for (j, other) in self.mirrors.iter().enumerate().skip(i + 1) {
                if !usable[j] {
                    continue;
                }
                let (c, d) = other.endpoints();
                let dist = segment_segment_distance(a, b, c, d);
                if dist < MIN_CLEARANCE {
                    violations.push(Violation {
                        code: ViolationCode::MirrorsIntersect,
                        mirrors: vec![i + 1, j + 1],
                        detail: if dist == 0.0 {
                            format!("mirrors {} and {} cross", i + 1, j + 1)
                        } else {
                            format!("mirrors {} and {} are {:.3e} apart", i + 1, j + 1, dist)
                        },
                    });
                }
            }
            if self.source.is_finite() {
                let dist = self.mirrors[i].distance_to_point(self.source);
                if dist < MIN_CLEARANCE {
                    violations.push(Violation {
                        code: ViolationCode::SourceOnMirror,
                        mirrors: vec![i + 1],
                        detail: format!("source is {:.3e} from mirror {}", dist, i + 1),
                    });
                }
            }
        }
        ValidationReport {
            valid: violations.is_empty(),
            violations,
        }
    }

    /// All mirror endpoints followed by the source.
    pub fn key_points(&self) -> Vec<Vec2> {
        let mut pts: Vec<Vec2> = self
            .mirrors
            .iter()
            .flat_map(|m| {
                let (a, b) = m.endpoints();
                [a, b]
            })
            .collect();
        pts.push(self.source);
        pts
    }

    pub fn enclosing_circle(&self) -> EnclosingCircle {
        self.enclosing_circle_with_margin(DEFAULT_CIRCLE_MARGIN)
    }

    /// Circle about the bounding-box center, with radius `margin` times the
    /// distance to the farthest endpoint or source.
    pub fn enclosing_circle_with_margin(&self, margin: f64) -> EnclosingCircle {
        let pts = self.key_points();
        let (mut lo, mut hi) = (pts[0], pts[0]);
        for p in &pts {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let center = (lo + hi) * 0.5;
        let reach = pts.iter().map(|p| p.distance(center)).fold(0.0, f64::max);
        let radius = if reach > 0.0 { margin * reach } else { 1.0 };
        EnclosingCircle { center, radius }
    }
}

/// The circle K that holds every mirror and the source in its interior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnclosingCircle {
    pub center: Vec2,
    pub radius: f64,
}

impl EnclosingCircle {
    pub fn new(center: Vec2, radius: f64) -> Self {
        EnclosingCircle { center, radius }
    }

    pub fn contains_strictly(&self, p: Vec2) -> bool {
        p.distance(self.center) < self.radius
    }

    pub fn contains_scene(&self, scene: &Scene) -> bool {
        scene.key_points().into_iter().all(|p| self.contains_strictly(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn turn(n: i64, d: i64) -> RationalTurn {
        RationalTurn::new(n, d).unwrap()
    }

    fn close(a: Vec2, b: Vec2) -> bool {
        a.distance(b) < 1e-12
    }

    pub(crate) fn toy_scene() -> Scene {
        Scene::new(
            vec![
                Mirror::new(Vec2::new(0.2, 0.0), 1.0, turn(0, 1)),
                Mirror::new(Vec2::new(0.0, 0.2), 1.0, turn(1, 2)),
            ],
            Vec2::new(0.3, 0.7),
        )
    }

    #[test]
    fn endpoint_examples() {
        let m = Mirror::new(Vec2::new(-1.0, 0.0), 2.0, turn(0, 1));
        let (a, b) = m.endpoints();
        assert!(close(a, Vec2::new(-1.0, 0.0)) && close(b, Vec2::new(1.0, 0.0)));
        let m = Mirror::new(Vec2::new(0.0, 0.0), 1.0, turn(1, 2));
        assert_eq!(m.endpoints().1, Vec2::new(0.0, 1.0));
        let m = Mirror::new(Vec2::new(0.0, 0.0), SQRT_2, turn(1, 4));
        assert!(close(m.endpoints().1, Vec2::new(1.0, 1.0)));
    }

    #[test]
    fn special_directions_agree_with_trig() {
        for (n, d) in [
            (0, 1),
            (1, 1),
            (1, 2),
            (3, 2),
            (1, 4),
            (3, 4),
            (5, 4),
            (7, 4),
            (1, 3),
            (5, 6),
        ] {
            let m = Mirror::new(Vec2::default(), 1.0, turn(n, d));
            let t = Vec2::from_angle(turn(n, d).radians());
            assert!(m.direction().distance(t) < 1e-15, "{n}/{d}");
        }
    }

    #[test]
    fn toy_scene_is_valid() {
        let report = toy_scene().validate();
        assert!(report.valid, "{report:?}");
    }

    #[test]
    fn crossing_mirrors_are_reported() {
        let s = Scene::new(
            vec![
                Mirror::new(Vec2::new(-1.0, 0.0), 2.0, turn(0, 1)),
                Mirror::new(Vec2::new(0.0, -1.0), 2.0, turn(1, 2)),
            ],
            Vec2::new(3.0, 3.0),
        );
        let report = s.validate();
        assert!(!report.valid);
        assert!(report.has(ViolationCode::MirrorsIntersect));
        assert_eq!(report.violations[0].mirrors, vec![1, 2]);
    }

    #[test]
    fn source_on_mirror_is_reported() {
        let s = Scene::new(
            vec![Mirror::new(Vec2::new(-1.0, 0.0), 2.0, turn(0, 1))],
            Vec2::new(0.0, 0.0),
        );
        assert!(s.validate().has(ViolationCode::SourceOnMirror));
    }

    #[test]
    fn degenerate_inputs_are_reported() {
        let s = Scene::new(
            vec![Mirror::new(Vec2::new(-1.0, 0.0), 0.0, turn(0, 1))],
            Vec2::new(0.0, 1.0),
        );
        assert!(s.validate().has(ViolationCode::NonPositiveLength));
        let s = Scene::new(vec![], Vec2::new(0.0, 1.0));
        assert!(s.validate().has(ViolationCode::EmptyScene));
        let s = Scene::new(
            vec![Mirror::new(Vec2::new(f64::NAN, 0.0), 1.0, turn(0, 1))],
            Vec2::new(0.0, 1.0),
        );
        assert!(s.validate().has(ViolationCode::NonFiniteCoordinate));
    }

    #[test]
    fn enclosing_circle_examples() {
        let s = Scene::new(
            vec![Mirror::new(Vec2::new(-1.0, 0.0), 2.0, turn(0, 1))],
            Vec2::new(0.0, 1.0),
        );
        let k = s.enclosing_circle();
        // bounding box [-1,1]x[0,1]: center (0, 0.5), farthest point at distance sqrt(1.25)
        assert!(close(k.center, Vec2::new(0.0, 0.5)));
        assert!((k.radius - 1.25 * 1.25f64.sqrt()).abs() < 1e-12);
        assert!((k.radius - 1.3975).abs() < 1e-4);
        assert!(k.contains_scene(&s));

        let tiny = Scene::new(
            vec![Mirror::new(Vec2::new(0.0, 0.0), 1e-6, turn(0, 1))],
            Vec2::new(0.0, 1.0),
        );
        let k = tiny.enclosing_circle();
        assert!((k.center.x - 0.5e-6).abs() < 1e-12 && (k.center.y - 0.5).abs() < 1e-12);
        assert!(k.radius >= 1.25 * 0.5);

        let cross = Scene::new(
            vec![
                Mirror::new(Vec2::new(1.0, -1.0), 2.0, turn(1, 2)),
                Mirror::new(Vec2::new(-1.0, -1.0), 2.0, turn(1, 2)),
                Mirror::new(Vec2::new(-0.5, 2.0), 1.0, turn(0, 1)),
                Mirror::new(Vec2::new(-0.5, -2.0), 1.0, turn(0, 1)),
            ],
            Vec2::new(0.0, 0.0),
        );
        assert!(close(cross.enclosing_circle().center, Vec2::new(0.0, 0.0)));
    }
}
