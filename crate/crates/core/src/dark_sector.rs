//! Unlit infinite sectors.
//!
//! An arc `(α, β)` of escape directions that no ray exits in, with measure
//! below π, certifies a dark sector: tangent lines to K at the points a
//! quarter turn outside the arc, with directions α and β, meet at the apex
//! of an open wedge. Every ray leaving K that reaches a point of the wedge
//! has its direction inside `(α, β)`, so no light from the source gets there.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arcs::{Arc, ArcSet};
use crate::circle_map::Decomposition;
use crate::exact_angle::normalize_radians;
use crate::geometry::Vec2;
use crate::scene::{EnclosingCircle, Scene};
use crate::tracer::{exit_ray, TraceStatus, Tracer};

/// Measure given to unlit arcs of measure π or more.
pub const MAX_DARK_MEASURE: f64 = PI - 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SectorError {
    #[error("dark arc measure {0} is not in (0, π)")]
    BadMeasure(f64),
    #[error("point at distance {distance} is not outside the circle of radius {radius}")]
    InsideCircle { distance: f64, radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DarkArc {
    pub arc: Arc,
    /// Index into the unlit-arc list it was taken from.
    pub unlit_index: usize,
    /// Whether the unlit arc was shrunk to fit below π.
    pub shrunk: bool,
}

impl DarkArc {
    pub fn from_unlit(arc: Arc, unlit_index: usize) -> Self {
        if arc.measure() >= PI {
            DarkArc {
                arc: arc.resized(MAX_DARK_MEASURE),
                unlit_index,
                shrunk: true,
            }
        } else {
            DarkArc {
                arc,
                unlit_index,
                shrunk: false,
            }
        }
    }
}

/// Largest unlit arc, shrunk about its midpoint if it is π or wider.
pub fn select_dark_arc(unlit: &[Arc]) -> Option<DarkArc> {
    let (i, arc) = unlit
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.measure().total_cmp(&b.1.measure()))?;
    Some(DarkArc::from_unlit(*arc, i))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DarkSector {
    pub apex: Vec2,
    pub dir_lo: f64,
    pub dir_hi: f64,
    pub tangent_points: [Vec2; 2],
    pub circle: EnclosingCircle,
}

impl DarkSector {
    pub fn angle(&self) -> f64 {
        normalize_radians(self.dir_hi - self.dir_lo)
    }

    pub fn arc(&self) -> Arc {
        Arc::new(self.dir_lo, self.dir_hi)
    }

    /// Strictly inside both boundary half-planes.
    pub fn contains(&self, p: Vec2) -> bool {
        let rel = p - self.apex;
        Vec2::from_angle(self.dir_lo).cross(rel) > 0.0 && Vec2::from_angle(self.dir_hi).cross(rel) < 0.0
    }

    /// Whether the ray `origin + t·(cos θ, sin θ)`, `t ≥ 0`, enters the open sector.
    pub fn ray_enters(&self, origin: Vec2, theta: f64) -> bool {
        let d = Vec2::from_angle(theta);
        let rel = origin - self.apex;
        let u_lo = Vec2::from_angle(self.dir_lo);
        let u_hi = Vec2::from_angle(self.dir_hi);
        // both constraints as h0 + t·h1 > 0
        let constraints = [(u_lo.cross(rel), u_lo.cross(d)), (-u_hi.cross(rel), -u_hi.cross(d))];
        let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
        for (h0, h1) in constraints {
            if h1 > 0.0 {
                lo = lo.max(-h0 / h1);
            } else if h1 < 0.0 {
                hi = hi.min(-h0 / h1);
            } else if h0 <= 0.0 {
                return false;
            }
        }
        hi > lo && hi - lo > 1e-12 * (1.0 + lo.abs())
    }
}

/// Tangent-line construction of the sector certified by `arc`.
pub fn build_sector(arc: &DarkArc, circle: &EnclosingCircle) -> Result<DarkSector, SectorError> {
    let m = arc.arc.measure();
    if !(m > 0.0 && m < PI) {
        return Err(SectorError::BadMeasure(m));
    }
    let alpha = arc.arc.start;
    let beta = alpha + m;
    let o = circle.center;
    let r = circle.radius;
    let t1 = o + Vec2::from_angle(alpha + FRAC_PI_2) * r;
    let t2 = o + Vec2::from_angle(beta - FRAC_PI_2) * r;
    let u1 = Vec2::from_angle(alpha);
    let u2 = Vec2::from_angle(beta);
    // t1 + a·u1 = t2 + b·u2
    let a = (t2 - t1).cross(u2) / u1.cross(u2);
    let apex = t1 + u1 * a;
    Ok(DarkSector {
        apex,
        dir_lo: arc.arc.start,
        dir_hi: normalize_radians(beta),
        tangent_points: [t1, t2],
        circle: *circle,
    })
}

/// Directions of all rays that leave K and pass through `p`.
pub fn direction_arc(p: Vec2, circle: &EnclosingCircle) -> Result<Arc, SectorError> {
    let rel = p - circle.center;
    let dist = rel.norm();
    if dist <= circle.radius {
        return Err(SectorError::InsideCircle {
            distance: dist,
            radius: circle.radius,
        });
    }
    let psi = rel.angle();
    let half = (circle.radius / dist).asin();
    Ok(Arc::new(psi - half, psi + half))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Offender {
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DarknessReport {
    /// Sampled sector points whose direction arc lies inside the dark arc.
    pub points_pass: bool,
    pub points_checked: usize,
    /// Dark arc disjoint from every image arc.
    pub images_pass: bool,
    /// No sampled exit ray enters the sector.
    pub exit_rays_pass: bool,
    pub exit_rays_checked: usize,
    pub offenders: Vec<Offender>,
}

impl DarknessReport {
    pub fn passed(&self) -> bool {
        self.points_pass && self.images_pass && self.exit_rays_pass
    }
}

/// Slack allowed when comparing a sampled point's direction arc with the dark arc.
const INCLUSION_SLACK: f64 = 1e-12;

fn arc_within(inner: &Arc, outer: &Arc) -> bool {
    let off = normalize_radians(inner.start - outer.start);
    let off = if off > outer.measure() + INCLUSION_SLACK {
        off - std::f64::consts::TAU
    } else {
        off
    };
    off >= -INCLUSION_SLACK && off + inner.measure() <= outer.measure() + INCLUSION_SLACK
}

/// Independent checks that a sector is dark:
/// (i) `n` random sector points (log-uniform radius in `[1, 10⁶]·R`) see K
/// only through the dark arc; (ii) the dark arc misses every image arc;
/// (iii) exit rays at each component's endpoints and midpoint avoid the sector.
pub fn verify_darkness(sector: &DarkSector, scene: &Scene, d: &Decomposition, n: usize, seed: u64) -> DarknessReport {
    let circle = sector.circle;
    let dark = sector.arc();
    let mut offenders = Vec::new();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec2> = (0..n)
        .map(|_| {
            let r = circle.radius * 10f64.powf(rng.gen_range(0.0..6.0));
            let u: f64 = rng.gen_range(0.0..1.0);
            let u = u.clamp(1e-9, 1.0 - 1e-9);
            sector.apex + Vec2::from_angle(dark.at(u)) * r
        })
        .collect();
    let bad_points: Vec<Offender> = points
        .par_iter()
        .filter_map(|&p| {
            if !sector.contains(p) {
                return Some(Offender {
                    check: "points".into(),
                    detail: format!("sample ({}, {}) fell outside the sector", p.x, p.y),
                });
            }
            match direction_arc(p, &circle) {
                Ok(a) if arc_within(&a, &dark) => None,
                Ok(a) => Some(Offender {
                    check: "points".into(),
                    detail: format!(
                        "point ({}, {}) is reached by directions ({}, {})",
                        p.x, p.y, a.start, a.end
                    ),
                }),
                Err(e) => Some(Offender {
                    check: "points".into(),
                    detail: e.to_string(),
                }),
            }
        })
        .collect();
    let points_pass = bad_points.is_empty();
    offenders.extend(bad_points.into_iter().take(10));

    let overlap = ArcSet::from_arc(&dark).intersection(&d.image_set());
    let images_pass = overlap.is_empty();
    if !images_pass {
        for a in overlap.to_arcs().iter().take(10) {
            offenders.push(Offender {
                check: "images".into(),
                detail: format!("dark arc meets image arc ({}, {})", a.start, a.end),
            });
        }
    }

    let tracer = Tracer::new(scene);
    let probes: Vec<f64> = d
        .components
        .iter()
        .flat_map(|c| [c.arc.at(0.0), c.arc.at(0.5), c.arc.at(1.0)])
        .collect();
    let ray_results: Vec<Option<Offender>> = probes
        .par_iter()
        .map(|&theta| {
            let tr = tracer.trace(theta, d.params.cap);
            if tr.status != TraceStatus::Escaped {
                return None;
            }
            let (q, dir) = exit_ray(&tr, &circle).ok()?;
            sector.ray_enters(q, dir).then(|| Offender {
                check: "exit-rays".into(),
                detail: format!("ray from direction {theta} exits at {dir} and enters the sector"),
            })
        })
        .collect();
    let exit_rays_checked = probes.len();
    let bad_rays: Vec<Offender> = ray_results.into_iter().flatten().collect();
    let exit_rays_pass = bad_rays.is_empty();
    offenders.extend(bad_rays.into_iter().take(10));

    DarknessReport {
        points_pass,
        points_checked: n,
        images_pass,
        exit_rays_pass,
        exit_rays_checked,
        offenders,
    }
}
