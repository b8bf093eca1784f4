//! The escape-direction circle map.
//!
//! Directions from the source are sampled on an even grid; adjacent seeds
//! whose traces differ in itinerary or status are separated by bisection
//! until each boundary sits in a bracket of width at most `eps_b`. Maximal
//! runs of a single itinerary become components of the escape set, each
//! carrying the exact group element the map applies on it.
//!
//! Components narrower than the seed spacing can be missed. The missed mass
//! is bounded by `2π − measure_U − trapped measure`, which reports carry.

use std::f64::consts::TAU;

use rayon::prelude::*;
use thiserror::Error;

use crate::arcs::{Arc, ArcSet};
use crate::exact_angle::{circle_distance, GroupElement, Parity};
use crate::scene::{EnclosingCircle, Scene};
use crate::tracer::{Stop, TraceStatus, Tracer, DEFAULT_BOUNCE_CAP};

pub const DEFAULT_SEEDS: usize = 4096;
pub const DEFAULT_EPS_B: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapParams {
    pub seeds: usize,
    pub eps_b: f64,
    pub cap: usize,
}

impl Default for MapParams {
    fn default() -> Self {
        MapParams {
            seeds: DEFAULT_SEEDS,
            eps_b: DEFAULT_EPS_B,
            cap: DEFAULT_BOUNCE_CAP,
        }
    }
}

impl MapParams {
    pub fn check(&self) -> Result<(), MapError> {
        if self.seeds < 8 {
            return Err(MapError::InvalidParams(format!("seed count {} < 8", self.seeds)));
        }
        if !(self.eps_b > 0.0 && self.eps_b <= 1e-3) {
            return Err(MapError::InvalidParams(format!(
                "eps_b {} outside (0, 1e-3]",
                self.eps_b
            )));
        }
        if self.cap < 1 {
            return Err(MapError::InvalidParams("bounce cap must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("invalid decomposition parameters: {0}")]
    InvalidParams(String),
    #[error("directions {theta1} and {theta2} share an itinerary but not an isometry")]
    IsometryMismatch { theta1: f64, theta2: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapComponent {
    pub arc: Arc,
    pub itinerary: Vec<Stop>,
    pub isometry: GroupElement,
    pub image: Arc,
}

impl MapComponent {
    pub fn eval(&self, theta: f64) -> f64 {
        self.isometry.apply(theta)
    }
}

/// Image of an arc under `θ ↦ sθ + cπ`; orientation flips when `s = −1`.
pub fn image_of(arc: &Arc, g: &GroupElement) -> Arc {
    if arc.is_full() {
        return Arc::full();
    }
    match g.s {
        Parity::Plus => Arc::new(g.apply(arc.start), g.apply(arc.end)),
        Parity::Minus => Arc::new(g.apply(arc.end), g.apply(arc.start)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// Disjoint, sorted by arc start.
    pub components: Vec<MapComponent>,
    pub singular_directions: Vec<f64>,
    pub trapped_arcs: Vec<Arc>,
    pub measure_u: f64,
    pub params: MapParams,
    pub circle: EnclosingCircle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Key {
    status: TraceStatus,
    itinerary: Vec<Stop>,
}

#[derive(Debug, Clone)]
struct Sample {
    /// Position on the unrolled circle `[0, 2π]`.
    theta: f64,
    key: Key,
    exact: GroupElement,
}

#[derive(Debug, Clone)]
struct Boundary {
    lo: Sample,
    hi: Sample,
}

struct Sampler<'a> {
    tracer: Tracer<'a>,
    params: MapParams,
}

impl Sampler<'_> {
    fn sample(&self, theta: f64) -> Sample {
        let tr = self.tracer.trace(theta, self.params.cap);
        Sample {
            theta,
            key: Key {
                status: tr.status,
                itinerary: tr.itinerary,
            },
            exact: tr.exit_dir_exact,
        }
    }

    fn refine(&self, mut lo: Sample, mut hi: Sample, out: &mut Vec<Boundary>) {
        while hi.theta - lo.theta > self.params.eps_b {
            let mid = self.sample(0.5 * (lo.theta + hi.theta));
            if mid.key == lo.key {
                lo = mid;
            } else if mid.key == hi.key {
                hi = mid;
            } else {
                self.refine(lo, mid.clone(), out);
                self.refine(mid, hi, out);
                return;
            }
        }
        out.push(Boundary { lo, hi });
    }
}

/// Splits the direction circle at the source into maximal constant-itinerary arcs.
pub fn decompose(scene: &Scene, circle: &EnclosingCircle, params: MapParams) -> Result<Decomposition, MapError> {
    params.check()?;
    let sampler = Sampler {
        tracer: Tracer::new(scene),
        params,
    };
    let n = params.seeds;
    let step = TAU / n as f64;
    let seeds: Vec<Sample> = (0..n)
        .into_par_iter()
        .map(|i| sampler.sample(i as f64 * step))
        .collect();

    let boundaries: Vec<Boundary> = (0..n)
        .into_par_iter()
        .map(|i| {
            let lo = seeds[i].clone();
            let mut hi = seeds[(i + 1) % n].clone();
            if i + 1 == n {
                hi.theta = TAU;
            }
            let mut out = Vec::new();
            if lo.key != hi.key {
                sampler.refine(lo, hi, &mut out);
            }
            out
        })
        .flatten()
        .collect();

    let mut components = Vec::new();
    let mut trapped_arcs = Vec::new();
    let mut singular_directions = Vec::new();

    if boundaries.is_empty() {
        let s = &seeds[0];
        match s.key.status {
            TraceStatus::Escaped => components.push(MapComponent {
                arc: Arc::full(),
                itinerary: s.key.itinerary.clone(),
                isometry: s.exact.clone(),
                image: image_of(&Arc::full(), &s.exact),
            }),
            TraceStatus::BounceCapExceeded => trapped_arcs.push(Arc::full()),
            TraceStatus::Singular => {}
        }
    }

    let b = boundaries.len();
    for j in 0..b {
        let here = &boundaries[j];
        let next = &boundaries[(j + 1) % b];
        let start = &here.hi;
        let end = &next.lo;
        debug_assert_eq!(start.key, end.key);
        let width = if j + 1 < b {
            end.theta - start.theta
        } else {
            end.theta + TAU - start.theta
        };
        match start.key.status {
            TraceStatus::Singular => {
                let span_lo = here.lo.theta;
                let span_hi = if j + 1 < b { next.hi.theta } else { next.hi.theta + TAU };
                singular_directions.push(crate::exact_angle::normalize_radians(0.5 * (span_lo + span_hi)));
                continue;
            }
            _ if width <= 0.0 => continue,
            TraceStatus::Escaped => {
                if start.exact != end.exact {
                    return Err(MapError::IsometryMismatch {
                        theta1: start.theta,
                        theta2: end.theta,
                    });
                }
                let arc = Arc::new(start.theta, end.theta);
                components.push(MapComponent {
                    image: image_of(&arc, &start.exact),
                    arc,
                    itinerary: start.key.itinerary.clone(),
                    isometry: start.exact.clone(),
                });
            }
            TraceStatus::BounceCapExceeded => trapped_arcs.push(Arc::new(start.theta, end.theta)),
        }
        // A boundary between two non-singular runs is itself a singular direction.
        if next.lo.key.status != TraceStatus::Singular && next.hi.key.status != TraceStatus::Singular {
            singular_directions.push(crate::exact_angle::normalize_radians(
                0.5 * (next.lo.theta + next.hi.theta),
            ));
        }
    }

    components.sort_by(|x, y| x.arc.start.total_cmp(&y.arc.start));
    trapped_arcs.sort_by(|x, y| x.start.total_cmp(&y.start));
    singular_directions.sort_by(f64::total_cmp);
    let measure_u = components.iter().map(|c| c.arc.measure()).sum();
    Ok(Decomposition {
        components,
        singular_directions,
        trapped_arcs,
        measure_u,
        params,
        circle: *circle,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Injectivity {
    pub injective: bool,
    /// Two distinct directions with (numerically) equal images.
    pub witness: Option<(f64, f64)>,
    /// Indices of the two components whose images overlap.
    pub components: Option<(usize, usize)>,
}

impl Decomposition {
    pub fn measure_u(&self) -> f64 {
        self.measure_u
    }

    pub fn trapped_measure(&self) -> f64 {
        self.trapped_arcs.iter().map(Arc::measure).sum()
    }

    /// Directions unaccounted for: boundary brackets plus anything unresolved.
    pub fn unresolved_measure(&self) -> f64 {
        (TAU - self.measure_u - self.trapped_measure()).max(0.0)
    }

    pub fn component_at(&self, theta: f64) -> Option<&MapComponent> {
        self.components.iter().find(|c| c.arc.contains(theta))
    }

    pub fn image_arcs(&self) -> Vec<Arc> {
        self.components.iter().map(|c| c.image).collect()
    }

    pub fn domain_set(&self) -> ArcSet {
        ArcSet::from_arcs(self.components.iter().map(|c| &c.arc))
    }

    pub fn image_set(&self) -> ArcSet {
        ArcSet::from_arcs(self.components.iter().map(|c| &c.image))
    }

    /// Non-injective iff two component images overlap in more than `eps_b`.
    pub fn is_injective(&self) -> Injectivity {
        let sets: Vec<ArcSet> = self.components.iter().map(|c| ArcSet::from_arc(&c.image)).collect();
        for i in 0..sets.len() {
            for j in (i + 1)..sets.len() {
                let overlap = sets[i].intersection(&sets[j]);
                if overlap.measure() <= self.params.eps_b {
                    continue;
                }
                let piece = overlap.largest_arc().expect("non-empty overlap");
                let phi = piece.midpoint();
                let t1 = self.components[i].isometry.inverse().apply(phi);
                let t2 = self.components[j].isometry.inverse().apply(phi);
                return Injectivity {
                    injective: false,
                    witness: Some((t1, t2)),
                    components: Some((i, j)),
                };
            }
        }
        Injectivity {
            injective: true,
            witness: None,
            components: None,
        }
    }

    /// Directions in the escape set that are not exit directions: the domain
    /// minus the images grown by `eps_b`. Slivers no wider than `eps_b` are dropped.
    pub fn unlit_arcs(&self) -> Vec<Arc> {
        let eps = self.params.eps_b;
        let grown = ArcSet::from_arcs(
            self.components
                .iter()
                .map(|c| c.image.expanded(eps))
                .collect::<Vec<_>>()
                .iter(),
        );
        self.domain_set()
            .difference(&grown)
            .to_arcs()
            .into_iter()
            .filter(|a| a.measure() > eps)
            .collect()
    }
}

pub fn image_arcs(d: &Decomposition) -> Vec<Arc> {
    d.image_arcs()
}

pub fn is_injective(d: &Decomposition) -> Injectivity {
    d.is_injective()
}

pub fn unlit_arcs(d: &Decomposition) -> Vec<Arc> {
    d.unlit_arcs()
}

pub fn measure_u(d: &Decomposition) -> f64 {
    d.measure_u
}

/// Distance on the circle between the images of two directions under one component.
pub fn image_separation(c: &MapComponent, t1: f64, t2: f64) -> f64 {
    circle_distance(c.eval(t1), c.eval(t2))
}
