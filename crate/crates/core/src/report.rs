//! JSON documents emitted by the command-line tool.
//!
//! Directions are given in radians. Exact quantities (group elements, cone
//! angles) also carry a string in units of π.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arcs::Arc;
use crate::circle_map::{Decomposition, MapComponent};
use crate::dark_sector::{DarkArc, DarkSector, DarknessReport};
use crate::exact_angle::GroupElement;
use crate::geometry::Vec2;
use crate::scene::{EnclosingCircle, SceneDocument};
use crate::tracer::{Lip, Stop, TraceResult, TraceStatus};
use crate::unfolding::{ConeCycle, Endpoint, Pole, SurfaceCensus, UnfoldedSurface, Zero};

/// `θ ↦ s·θ + (c_num / c_den)·π`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsometryDoc {
    pub s: i32,
    pub c_num: i64,
    pub c_den: i64,
    pub c_pi: String,
    pub c_radians: f64,
}

impl From<&GroupElement> for IsometryDoc {
    fn from(g: &GroupElement) -> Self {
        IsometryDoc {
            s: g.s.sign(),
            c_num: g.c.num().to_i64().expect("group offsets have small denominators"),
            c_den: g.c.den().to_i64().expect("group offsets have small denominators"),
            c_pi: g.c.to_string(),
            c_radians: g.c.radians(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StopDoc {
    pub mirror: usize,
    pub side: Lip,
}

fn stops(itinerary: &[Stop]) -> Vec<StopDoc> {
    itinerary
        .iter()
        .map(|&(mirror, side)| StopDoc { mirror, side })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcDoc {
    pub start: f64,
    pub end: f64,
    pub measure: f64,
}

impl From<&Arc> for ArcDoc {
    fn from(a: &Arc) -> Self {
        ArcDoc {
            start: a.start,
            end: a.end,
            measure: a.measure(),
        }
    }
}

impl ArcDoc {
    pub fn arc(&self) -> Arc {
        Arc {
            start: self.start,
            end: self.end,
        }
    }
}

/// Numeric settings a report was produced with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDoc {
    pub seeds: usize,
    pub eps_b: f64,
    pub cap: usize,
    pub samples: usize,
    pub seed: u64,
    pub margin: f64,
    pub max_group_order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceDoc {
    pub theta0: f64,
    pub cap: usize,
    pub status: TraceStatus,
    pub bounce_count: usize,
    pub itinerary: Vec<StopDoc>,
    pub path: Vec<Vec2>,
    pub exit_point: Vec2,
    pub exit_dir_numeric: f64,
    pub exit_isometry: IsometryDoc,
    pub exit_dir_from_isometry: f64,
    pub parity_consistent: bool,
}

impl TraceDoc {
    pub fn new(tr: &TraceResult, cap: usize) -> Self {
        TraceDoc {
            theta0: tr.theta0,
            cap,
            status: tr.status,
            bounce_count: tr.bounce_count,
            itinerary: stops(&tr.itinerary),
            path: tr.path.clone(),
            exit_point: tr.exit_point,
            exit_dir_numeric: tr.exit_dir_numeric,
            exit_isometry: (&tr.exit_dir_exact).into(),
            exit_dir_from_isometry: tr.exit_dir_exact.apply(tr.theta0),
            parity_consistent: tr.parity_consistent(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub arc: ArcDoc,
    pub itinerary: Vec<StopDoc>,
    pub isometry: IsometryDoc,
    pub image: ArcDoc,
}

impl From<&MapComponent> for ComponentDoc {
    fn from(c: &MapComponent) -> Self {
        ComponentDoc {
            arc: (&c.arc).into(),
            itinerary: stops(&c.itinerary),
            isometry: (&c.isometry).into(),
            image: (&c.image).into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub theta1: f64,
    pub theta2: f64,
    pub image1: f64,
    pub image2: f64,
    pub components: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InjectivityDoc {
    pub injective: bool,
    pub witness: Option<WitnessDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionDoc {
    pub params: ParamsDoc,
    pub circle: EnclosingCircle,
    pub measure_u: f64,
    pub trapped_measure: f64,
    pub unresolved_measure: f64,
    /// Components narrower than the seed spacing may be missing.
    pub resolution: f64,
    pub components: Vec<ComponentDoc>,
    pub singular_directions: Vec<f64>,
    pub trapped_arcs: Vec<ArcDoc>,
    pub injectivity: InjectivityDoc,
    pub unlit_arcs: Vec<ArcDoc>,
}

impl DecompositionDoc {
    pub fn new(d: &Decomposition, params: ParamsDoc) -> Self {
        let inj = d.is_injective();
        let witness = match (inj.witness, inj.components) {
            (Some((t1, t2)), Some((i, j))) => Some(WitnessDoc {
                theta1: t1,
                theta2: t2,
                image1: d.components[i].eval(t1),
                image2: d.components[j].eval(t2),
                components: [i, j],
            }),
            _ => None,
        };
        DecompositionDoc {
            params,
            circle: d.circle,
            measure_u: d.measure_u(),
            trapped_measure: d.trapped_measure(),
            unresolved_measure: d.unresolved_measure(),
            resolution: std::f64::consts::TAU / d.params.seeds as f64,
            components: d.components.iter().map(ComponentDoc::from).collect(),
            singular_directions: d.singular_directions.clone(),
            trapped_arcs: d.trapped_arcs.iter().map(ArcDoc::from).collect(),
            injectivity: InjectivityDoc {
                injective: inj.injective,
                witness,
            },
            unlit_arcs: d.unlit_arcs().iter().map(ArcDoc::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorDoc {
    pub unlit_index: usize,
    pub shrunk: bool,
    pub arc: ArcDoc,
    pub apex: Vec2,
    pub dir_lo: f64,
    pub dir_hi: f64,
    pub tangent_points: [Vec2; 2],
    pub verification: DarknessReport,
}

impl SectorDoc {
    pub fn new(arc: &DarkArc, s: &DarkSector, verification: DarknessReport) -> Self {
        SectorDoc {
            unlit_index: arc.unlit_index,
            shrunk: arc.shrunk,
            arc: (&arc.arc).into(),
            apex: s.apex,
            dir_lo: s.dir_lo,
            dir_hi: s.dir_hi,
            tangent_points: s.tangent_points,
            verification,
        }
    }

    pub fn sector(&self, circle: EnclosingCircle) -> DarkSector {
        DarkSector {
            apex: self.apex,
            dir_lo: self.dir_lo,
            dir_hi: self.dir_hi,
            tangent_points: self.tangent_points,
            circle,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorsDoc {
    pub scene: SceneDocument,
    pub decomposition: DecompositionDoc,
    /// Index into `sectors` of the sector built on the largest unlit arc.
    pub selected: Option<usize>,
    /// One sector per unlit arc.
    pub sectors: Vec<SectorDoc>,
    pub certified: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleDoc {
    pub slit: usize,
    pub endpoint: Endpoint,
    pub sheet_cycle: Vec<usize>,
    pub order: usize,
    pub cone_angle: f64,
    pub cone_angle_pi: String,
}

impl From<&Zero> for CycleDoc {
    fn from(z: &Zero) -> Self {
        let c: &ConeCycle = &z.cycle;
        CycleDoc {
            slit: c.slit + 1,
            endpoint: c.endpoint,
            sheet_cycle: c.sheet_cycle.clone(),
            order: z.order,
            cone_angle: z.cone_angle,
            cone_angle_pi: format!("{}π", 2 * c.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CensusDoc {
    pub m: usize,
    pub n_slits: usize,
    pub sheets: Vec<IsometryDoc>,
    /// `gluings[k][i]`: sheet reached from sheet `i` across slit `k + 1`.
    pub gluings: Vec<Vec<usize>>,
    pub zeros: Vec<CycleDoc>,
    pub poles: Vec<Pole>,
    pub zero_order_sum: i64,
    pub degree: i64,
    pub genus: i64,
    pub chi: i64,
    pub euler_agrees: bool,
}

impl CensusDoc {
    pub fn new(s: &UnfoldedSurface, c: &SurfaceCensus, chi: i64) -> Self {
        CensusDoc {
            m: c.m,
            n_slits: c.n_slits,
            sheets: s.sheets.iter().map(IsometryDoc::from).collect(),
            gluings: s.gluings.clone(),
            zeros: c.zeros.iter().map(CycleDoc::from).collect(),
            poles: c.poles.clone(),
            zero_order_sum: c.zero_order_sum(),
            degree: c.degree,
            genus: c.genus,
            chi,
            euler_agrees: chi == 2 - 2 * c.genus,
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(doc).expect("report documents serialize");
    out.push(b'\n');
    out
}
