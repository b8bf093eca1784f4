//! Billiard ray tracing among two-sided mirrors.
//!
//! Hit points use floating-point geometry; direction updates use the exact
//! mirror angle. Each trace carries both the numeric exit direction and the
//! exact group element `g` with `exit = g(θ0)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_angle::{normalize_radians, GroupElement, Parity};
use crate::geometry::Vec2;
use crate::scene::{EnclosingCircle, Mirror, Scene};

/// Minimum advance along a ray before a hit counts.
pub const EPS_ADVANCE: f64 = 1e-9;
/// Endpoint-proximity radius and parallel-grazing angle that make a ray singular.
pub const EPS_SINGULAR: f64 = 1e-9;
pub const DEFAULT_BOUNCE_CAP: usize = 10_000;

/// Which lip of a two-sided mirror was struck. `Plus` is the side the left
/// normal points to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Lip {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Lip {
    pub fn symbol(self) -> char {
        match self {
            Lip::Plus => '+',
            Lip::Minus => '-',
        }
    }
}

/// `(1-based mirror index, lip)`.
pub type Stop = (usize, Lip);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    pub mirror_index: usize,
    pub side: Lip,
    pub point: Vec2,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FirstHit {
    Hit(Hit),
    Escape,
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TraceStatus {
    Escaped,
    BounceCapExceeded,
    Singular,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceResult {
    pub status: TraceStatus,
    pub theta0: f64,
    pub itinerary: Vec<Stop>,
    /// Starts at the origin, then every reflection point.
    pub path: Vec<Vec2>,
    pub exit_point: Vec2,
    pub exit_dir_numeric: f64,
    pub exit_dir_exact: GroupElement,
    pub bounce_count: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("exit ray is only defined for escaped traces (status {0:?})")]
    NotEscaped(TraceStatus),
    #[error("exit point lies outside the enclosing circle")]
    OutsideCircle,
}

struct Candidate {
    t: f64,
    hit: Option<Hit>,
}

/// Nearest mirror hit along the ray `origin + t·(cos θ, sin θ)`, `t > EPS_ADVANCE`.
/// `skip` is a 1-based mirror index excluded from the search.
pub fn first_hit(origin: Vec2, theta: f64, scene: &Scene, skip: Option<usize>) -> FirstHit {
    let d = Vec2::from_angle(theta);
    let mut best: Option<Candidate> = None;
    let mut offer = |c: Candidate| {
        let better = match &best {
            None => true,
            // ties go to the singular candidate
            Some(b) => c.t < b.t - EPS_ADVANCE || (c.t <= b.t + EPS_ADVANCE && c.hit.is_none()),
        };
        if better {
            best = Some(c);
        }
    };

    for (i, m) in scene.mirrors.iter().enumerate() {
        let index = i + 1;
        if skip == Some(index) {
            continue;
        }
        let e = m.direction();
        let (a, b) = m.endpoints();
        let w = a - origin;
        let denom = d.cross(e);

        // endpoint grazing
        for q in [a, b] {
            let rel = q - origin;
            let t = rel.dot(d);
            if t > EPS_ADVANCE && d.cross(rel).abs() < EPS_SINGULAR {
                offer(Candidate { t, hit: None });
            }
        }

        if denom.abs() < EPS_SINGULAR {
            // running along the mirror line
            if d.cross(w).abs() <= EPS_SINGULAR {
                let t = (a - origin).dot(d).min((b - origin).dot(d));
                let far = (a - origin).dot(d).max((b - origin).dot(d));
                if far > EPS_ADVANCE {
                    offer(Candidate {
                        t: t.max(EPS_ADVANCE),
                        hit: None,
                    });
                }
            }
            continue;
        }

        let t = w.cross(e) / denom;
        let s = w.cross(d) / denom;
        if t > EPS_ADVANCE && s >= EPS_SINGULAR && s <= m.length - EPS_SINGULAR {
            let side = if d.dot(m.normal()) < 0.0 { Lip::Plus } else { Lip::Minus };
            offer(Candidate {
                t,
                hit: Some(Hit {
                    mirror_index: index,
                    side,
                    point: a + e * s,
                    t,
                }),
            });
        }
    }

    match best {
        None => FirstHit::Escape,
        Some(Candidate { hit: Some(h), .. }) => FirstHit::Hit(h),
        Some(Candidate { hit: None, .. }) => FirstHit::Singular,
    }
}

/// Specular reflection of a direction off a mirror: `2·angle·π − θ`.
pub fn reflect(theta: f64, mirror: &Mirror) -> f64 {
    normalize_radians(mirror.angle.double().turns_of_pi() * PI - theta)
}

pub fn reflect_exact(g: &GroupElement, mirror: &Mirror) -> GroupElement {
    mirror.reflection().compose(g)
}

/// Traces from a scene's source. Reusable for many directions.
pub struct Tracer<'a> {
    scene: &'a Scene,
    reflections: Vec<GroupElement>,
    /// `2·angle·π` per mirror.
    doubled: Vec<f64>,
}

impl<'a> Tracer<'a> {
    pub fn new(scene: &'a Scene) -> Self {
        Tracer {
            scene,
            reflections: scene.mirrors.iter().map(Mirror::reflection).collect(),
            doubled: scene
                .mirrors
                .iter()
                .map(|m| m.angle.double().turns_of_pi() * PI)
                .collect(),
        }
    }

    pub fn scene(&self) -> &Scene {
        self.scene
    }

    pub fn trace(&self, theta0: f64, cap: usize) -> TraceResult {
        self.trace_from(self.scene.source, theta0, cap)
    }

    pub fn trace_from(&self, origin: Vec2, theta0: f64, cap: usize) -> TraceResult {
        let theta0 = normalize_radians(theta0);
        let mut theta = theta0;
        let mut exact = GroupElement::identity();
        let mut point = origin;
        let mut path = vec![origin];
        let mut itinerary = Vec::new();
        let mut skip = None;
        let status = loop {
            match first_hit(point, theta, self.scene, skip) {
                FirstHit::Escape => break TraceStatus::Escaped,
                FirstHit::Singular => break TraceStatus::Singular,
                FirstHit::Hit(h) => {
                    if itinerary.len() >= cap {
                        break TraceStatus::BounceCapExceeded;
                    }
                    let k = h.mirror_index - 1;
                    theta = normalize_radians(self.doubled[k] - theta);
                    exact = self.reflections[k].compose(&exact);
                    point = h.point;
                    path.push(point);
                    itinerary.push((h.mirror_index, h.side));
                    skip = Some(h.mirror_index);
                }
            }
        };
        TraceResult {
            status,
            theta0,
            bounce_count: itinerary.len(),
            itinerary,
            path,
            exit_point: point,
            exit_dir_numeric: theta,
            exit_dir_exact: exact,
        }
    }
}

pub fn trace(scene: &Scene, theta0: f64, cap: usize) -> TraceResult {
    Tracer::new(scene).trace(theta0, cap)
}

impl TraceResult {
    pub fn parity_consistent(&self) -> bool {
        let expected = if self.bounce_count.is_multiple_of(2) {
            Parity::Plus
        } else {
            Parity::Minus
        };
        self.exit_dir_exact.s == expected
    }
}

/// Where the final straight portion of an escaped trace crosses K, and its direction.
pub fn exit_ray(tr: &TraceResult, k: &EnclosingCircle) -> Result<(Vec2, f64), TraceError> {
    if tr.status != TraceStatus::Escaped {
        return Err(TraceError::NotEscaped(tr.status));
    }
    let d = Vec2::from_angle(tr.exit_dir_numeric);
    let rel = tr.exit_point - k.center;
    // |rel + t d|² = R²  →  t² + 2(rel·d)t + |rel|² − R² = 0
    let b = rel.dot(d);
    let c = rel.dot(rel) - k.radius * k.radius;
    if c > 0.0 {
        return Err(TraceError::OutsideCircle);
    }
    let t = -b + (b * b - c).sqrt();
    Ok((tr.exit_point + d * t, tr.exit_dir_numeric))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_angle::{circle_distance, RationalTurn};
    use std::f64::consts::FRAC_PI_2;

    fn turn(n: i64, d: i64) -> RationalTurn {
        RationalTurn::new(n, d).unwrap()
    }

    fn single_mirror() -> Scene {
        Scene::new(
            vec![Mirror::new(Vec2::new(-1.0, 0.0), 2.0, turn(0, 1))],
            Vec2::new(0.0, 1.0),
        )
    }

    fn parallel_pair() -> Scene {
        Scene::new(
            vec![
                Mirror::new(Vec2::new(-1.0, 0.0), 2.0, turn(0, 1)),
                Mirror::new(Vec2::new(-1.0, 1.0), 2.0, turn(0, 1)),
            ],
            Vec2::new(0.0, 0.5),
        )
    }

    #[test]
    fn first_hit_examples() {
        let s = single_mirror();
        match first_hit(s.source, 1.5 * PI, &s, None) {
            FirstHit::Hit(h) => {
                assert_eq!(h.mirror_index, 1);
                assert_eq!(h.side, Lip::Plus);
                assert!(h.point.distance(Vec2::new(0.0, 0.0)) < 1e-12);
                assert!((h.t - 1.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(first_hit(s.source, 0.0, &s, None), FirstHit::Escape);
        assert_eq!(first_hit(s.source, 1.75 * PI, &s, None), FirstHit::Singular);
        // from below the struck lip is the minus side
        match first_hit(Vec2::new(0.3, -2.0), FRAC_PI_2, &s, None) {
            FirstHit::Hit(h) => assert_eq!(h.side, Lip::Minus),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn singular_direction_matches_intersection_arithmetic() {
        // Independent check: the ray at 7π/4 from (0,1) meets y = 0 at x = 1,
        // the mirror's endpoint, up to rounding.
        let (s, c) = (1.75 * PI).sin_cos();
        let t = 1.0 / -s;
        let x = t * c;
        assert!((x - 1.0).abs() < EPS_SINGULAR);
    }

    #[test]
    fn running_along_a_mirror_is_singular() {
        let s = single_mirror();
        assert_eq!(first_hit(Vec2::new(-3.0, 0.0), 0.0, &s, None), FirstHit::Singular);
        assert_eq!(first_hit(Vec2::new(-3.0, 0.5), 0.0, &s, None), FirstHit::Escape);
    }

    #[test]
    fn reflect_examples() {
        let flat = Mirror::new(Vec2::default(), 1.0, turn(0, 1));
        let upright = Mirror::new(Vec2::default(), 1.0, turn(1, 2));
        assert!(circle_distance(reflect(1.5 * PI, &flat), FRAC_PI_2) < 1e-12);
        assert!(circle_distance(reflect(PI / 3.0, &upright), 2.0 * PI / 3.0) < 1e-12);
        let tilted = Mirror::new(Vec2::default(), 1.0, turn(2, 7));
        assert!(circle_distance(reflect(reflect(1.1, &tilted), &tilted), 1.1) < 1e-12);
        let g = reflect_exact(&reflect_exact(&GroupElement::identity(), &tilted), &tilted);
        assert!(g.is_identity());
    }

    #[test]
    fn one_bounce_trace() {
        let tr = trace(&single_mirror(), 1.5 * PI, 100);
        assert_eq!(tr.status, TraceStatus::Escaped);
        assert_eq!(tr.itinerary, vec![(1, Lip::Plus)]);
        assert!(circle_distance(tr.exit_dir_numeric, FRAC_PI_2) < 1e-12);
        assert_eq!(tr.exit_dir_exact, GroupElement::new(Parity::Minus, turn(0, 1)));
        assert!(circle_distance(tr.exit_dir_exact.apply(1.5 * PI), FRAC_PI_2) < 1e-12);
        assert!(tr.parity_consistent());
        assert_eq!(tr.path.len(), 2);
    }

    #[test]
    fn direct_escape_trace() {
        let tr = trace(&single_mirror(), 0.0, 100);
        assert_eq!(tr.status, TraceStatus::Escaped);
        assert!(tr.itinerary.is_empty());
        assert_eq!(tr.exit_dir_numeric, 0.0);
        assert!(tr.exit_dir_exact.is_identity());
        assert_eq!(tr.exit_point, Vec2::new(0.0, 1.0));
    }

    #[test]
    fn perpendicular_orbit_hits_the_cap() {
        let tr = trace(&parallel_pair(), FRAC_PI_2, 50);
        assert_eq!(tr.status, TraceStatus::BounceCapExceeded);
        assert_eq!(tr.bounce_count, 50);
        assert_eq!(tr.itinerary[0], (2, Lip::Minus));
        assert_eq!(tr.itinerary[1], (1, Lip::Plus));
    }

    #[test]
    fn cap_counts_reflections() {
        let s = single_mirror();
        assert_eq!(trace(&s, 1.5 * PI, 1).status, TraceStatus::Escaped);
        assert_eq!(trace(&s, 1.5 * PI, 0).status, TraceStatus::BounceCapExceeded);
    }

    #[test]
    fn exit_ray_examples() {
        let k = EnclosingCircle::new(Vec2::new(0.0, 0.5), 2.0);
        let (p, dir) = exit_ray(&trace(&single_mirror(), 1.5 * PI, 100), &k).unwrap();
        // line x = 0 upward from the origin meets the circle at y = 0.5 + 2
        assert!(p.distance(Vec2::new(0.0, 2.5)) < 1e-12);
        assert!(circle_distance(dir, FRAC_PI_2) < 1e-12);

        let (p, dir) = exit_ray(&trace(&single_mirror(), 0.0, 100), &k).unwrap();
        assert!(p.distance(Vec2::new(3.75f64.sqrt(), 1.0)) < 1e-12);
        assert_eq!(dir, 0.0);

        let singular = trace(&single_mirror(), 1.75 * PI, 100);
        assert_eq!(singular.status, TraceStatus::Singular);
        assert_eq!(
            exit_ray(&singular, &k),
            Err(TraceError::NotEscaped(TraceStatus::Singular))
        );
    }

    #[test]
    fn traces_are_deterministic() {
        let s = parallel_pair();
        assert_eq!(trace(&s, 1.3, 500), trace(&s, 1.3, 500));
    }
}
