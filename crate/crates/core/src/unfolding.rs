//! Unfolding a mirror scene into a translation surface.
//!
//! Each sheet is a copy of the plane slit along every mirror, labelled by an
//! element of the reflection group. Crossing slit `k` from sheet `g` lands in
//! sheet `σ_k ∘ g`. Compactifying each sheet's infinity gives one double pole
//! per sheet; slit endpoints become zeros.

use std::collections::VecDeque;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_angle::{AngleError, GroupElement, ReflectionGroup};
use crate::scene::Scene;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnfoldError {
    #[error(transparent)]
    Group(#[from] AngleError),
    #[error("scene has no mirrors")]
    NoMirrors,
    #[error("gluing for slit {slit} is not a fixed-point-free involution")]
    BadGluing { slit: usize },
    #[error("gluing graph is disconnected")]
    Disconnected,
    #[error("genus from degree {degree} is not a non-negative integer")]
    BadGenus { degree: i64 },
    #[error("closed-form genus {closed_form} disagrees with degree genus {genus}")]
    ClosedFormMismatch { genus: i64, closed_form: i64 },
    #[error("Euler characteristic {chi} does not match genus {genus}")]
    EulerMismatch { chi: i64, genus: i64 },
}

#[derive(Debug, Clone)]
pub struct UnfoldedSurface {
    pub sheets: Vec<GroupElement>,
    /// `gluings[k][i]`: the sheet whose − lip of slit `k` is glued to the + lip
    /// of sheet `i` (and whose + lip is glued to the − lip of `i`).
    pub gluings: Vec<Vec<usize>>,
}

impl UnfoldedSurface {
    pub fn sheet_count(&self) -> usize {
        self.sheets.len()
    }

    pub fn slit_count(&self) -> usize {
        self.gluings.len()
    }

    pub fn is_connected(&self) -> bool {
        let m = self.sheets.len();
        if m == 0 {
            return false;
        }
        let mut seen = vec![false; m];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for g in &self.gluings {
                let j = g[i];
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

pub fn build_surface(scene: &Scene, max_order: usize) -> Result<UnfoldedSurface, UnfoldError> {
    if scene.mirrors.is_empty() {
        return Err(UnfoldError::NoMirrors);
    }
    let group = ReflectionGroup::generate(scene.mirror_angles(), max_order)?;
    let sheets = group.elements().to_vec();
    let mut gluings = Vec::with_capacity(scene.mirrors.len());
    for (k, mirror) in scene.mirrors.iter().enumerate() {
        let sigma = mirror.reflection();
        let perm: Vec<usize> = sheets
            .iter()
            .map(|g| group.index_of(&sigma.compose(g)).expect("group is closed"))
            .collect();
        if perm.iter().enumerate().any(|(i, &j)| j == i || perm[j] != i) {
            return Err(UnfoldError::BadGluing { slit: k });
        }
        gluings.push(perm);
    }
    let surface = UnfoldedSurface { sheets, gluings };
    if !surface.is_connected() {
        return Err(UnfoldError::Disconnected);
    }
    Ok(surface)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeCycle {
    pub slit: usize,
    pub endpoint: Endpoint,
    pub sheet_cycle: Vec<usize>,
}

impl ConeCycle {
    pub fn len(&self) -> usize {
        self.sheet_cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sheet_cycle.is_empty()
    }

    pub fn cone_angle(&self) -> f64 {
        TAU * self.len() as f64
    }

    /// Order as a zero of the differential.
    pub fn order(&self) -> usize {
        self.len() - 1
    }
}

/// Walks around each slit tip: a full turn inside sheet `i` goes from the +
/// lip to the − lip, which is glued to the + lip of `gluing_k(i)`.
pub fn cone_cycles(s: &UnfoldedSurface) -> Vec<ConeCycle> {
    let m = s.sheet_count();
    let mut out = Vec::new();
    for (k, gluing) in s.gluings.iter().enumerate() {
        for endpoint in [Endpoint::First, Endpoint::Second] {
            let mut visited = vec![false; m];
            for start in 0..m {
                if visited[start] {
                    continue;
                }
                let mut cycle = Vec::new();
                let mut i = start;
                loop {
                    visited[i] = true;
                    cycle.push(i);
                    i = gluing[i];
                    if i == start {
                        break;
                    }
                }
                out.push(ConeCycle {
                    slit: k,
                    endpoint,
                    sheet_cycle: cycle,
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Zero {
    pub cycle: ConeCycle,
    pub order: usize,
    pub cone_angle: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pole {
    pub sheet: usize,
    pub order: usize,
    pub residue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceCensus {
    pub m: usize,
    pub n_slits: usize,
    pub zeros: Vec<Zero>,
    pub poles: Vec<Pole>,
    pub degree: i64,
    pub genus: i64,
}

impl SurfaceCensus {
    pub fn zero_order_sum(&self) -> i64 {
        self.zeros.iter().map(|z| z.order as i64).sum()
    }

    pub fn all_simple(&self) -> bool {
        self.zeros.iter().all(|z| z.order == 1)
    }
}

pub fn census(s: &UnfoldedSurface, cycles: &[ConeCycle]) -> Result<SurfaceCensus, UnfoldError> {
    let m = s.sheet_count();
    let n = s.slit_count();
    let zeros: Vec<Zero> = cycles
        .iter()
        .map(|c| Zero {
            cycle: c.clone(),
            order: c.order(),
            cone_angle: c.cone_angle(),
        })
        .collect();
    let poles: Vec<Pole> = (0..m)
        .map(|sheet| Pole {
            sheet,
            order: 2,
            residue: 0.0,
        })
        .collect();
    let order_sum: i64 = zeros.iter().map(|z| z.order as i64).sum();
    let degree = order_sum - 2 * m as i64;
    if (degree + 2) % 2 != 0 || degree + 2 < 0 {
        return Err(UnfoldError::BadGenus { degree });
    }
    let genus = (degree + 2) / 2;
    if cycles.iter().all(|c| c.len() == 2) {
        let twice = m as i64 * (n as i64 - 2) + 2;
        if twice % 2 != 0 || twice / 2 != genus {
            return Err(UnfoldError::ClosedFormMismatch {
                genus,
                closed_form: twice / 2,
            });
        }
    }
    Ok(SurfaceCensus {
        m,
        n_slits: n,
        zeros,
        poles,
        degree,
        genus,
    })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    fn classes(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}

/// Euler characteristic of the glued cell complex, built from the gluings alone.
///
/// Each sheet is a sphere (the plane plus its point at infinity) cut along the
/// slits: vertices are the slit endpoints and ∞, edges are the two lips of
/// every slit plus one bridge from each slit to ∞, and the single face is
/// the disk left after cutting along the bridges. Gluing identifies lips in
/// pairs and their endpoints first-to-first, second-to-second.
pub fn euler_characteristic(s: &UnfoldedSurface) -> i64 {
    let m = s.sheet_count();
    let n = s.slit_count();
    // vertex ids: (sheet, slit, endpoint), then one infinity per sheet
    let endpoint_id = |sheet: usize, slit: usize, e: usize| (sheet * n + slit) * 2 + e;
    let mut vertices = UnionFind::new(2 * n * m + m);
    // lip ids: (sheet, slit, side); side 0 is +, 1 is −
    let lip_id = |sheet: usize, slit: usize, side: usize| (sheet * n + slit) * 2 + side;
    let mut lips = UnionFind::new(2 * n * m);

    for (k, gluing) in s.gluings.iter().enumerate() {
        for (i, &j) in gluing.iter().enumerate() {
            lips.union(lip_id(i, k, 0), lip_id(j, k, 1));
            for e in 0..2 {
                vertices.union(endpoint_id(i, k, e), endpoint_id(j, k, e));
            }
        }
    }
    let v = vertices.classes() as i64;
    let bridges = (n * m) as i64;
    let e = lips.classes() as i64 + bridges;
    let f = m as i64;
    v - e + f
}

/// Checks χ against the census genus.
pub fn euler_check(s: &UnfoldedSurface, census: &SurfaceCensus) -> Result<i64, UnfoldError> {
    let chi = euler_characteristic(s);
    if chi != 2 - 2 * census.genus {
        return Err(UnfoldError::EulerMismatch {
            chi,
            genus: census.genus,
        });
    }
    Ok(chi)
}

/// Combined angle of the unlit sectors across all sheets but one.
pub fn total_dark_angle(census: &SurfaceCensus, measure_u: f64) -> f64 {
    census.m.saturating_sub(1) as f64 * measure_u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_angle::{Parity, RationalTurn, DEFAULT_MAX_GROUP_ORDER};
    use crate::geometry::Vec2;
    use crate::scene::Mirror;
    use std::f64::consts::PI;

    fn turn(n: i64, d: i64) -> RationalTurn {
        RationalTurn::new(n, d).unwrap()
    }

    fn toy() -> Scene {
        Scene::new(
            vec![
                Mirror::new(Vec2::new(0.2, 0.0), 1.0, RationalTurn::zero()),
                Mirror::new(Vec2::new(0.0, 0.2), 1.0, turn(1, 2)),
            ],
            Vec2::new(0.3, 0.7),
        )
    }

    fn single() -> Scene {
        Scene::new(
            vec![Mirror::new(Vec2::new(-1.0, 0.0), 2.0, RationalTurn::zero())],
            Vec2::new(0.0, 1.0),
        )
    }

    fn three_parallel() -> Scene {
        Scene::new(
            (0..3)
                .map(|i| Mirror::new(Vec2::new(0.0, i as f64), 1.0, RationalTurn::zero()))
                .collect(),
            Vec2::new(0.5, 0.5),
        )
    }

    fn full(scene: &Scene) -> (UnfoldedSurface, Vec<ConeCycle>, SurfaceCensus, i64) {
        let s = build_surface(scene, DEFAULT_MAX_GROUP_ORDER).unwrap();
        let cycles = cone_cycles(&s);
        let c = census(&s, &cycles).unwrap();
        let chi = euler_check(&s, &c).unwrap();
        (s, cycles, c, chi)
    }

    #[test]
    fn toy_torus() {
        let (s, cycles, c, chi) = full(&toy());
        assert_eq!(s.sheet_count(), 4);
        for (k, g) in s.gluings.iter().enumerate() {
            let sigma = toy().mirrors[k].reflection();
            for (i, &j) in g.iter().enumerate() {
                assert_eq!(s.sheets[j], sigma.compose(&s.sheets[i]));
            }
        }
        assert_eq!(
            toy().mirrors[0].reflection(),
            GroupElement::new(Parity::Minus, turn(0, 1))
        );
        assert_eq!(
            toy().mirrors[1].reflection(),
            GroupElement::new(Parity::Minus, turn(1, 1))
        );
        assert_eq!(cycles.len(), 8);
        assert!(cycles
            .iter()
            .all(|c| c.len() == 2 && (c.cone_angle() - 4.0 * PI).abs() < 1e-12));
        assert_eq!(c.zeros.len(), 8);
        assert!(c.all_simple());
        assert_eq!(c.poles.len(), 4);
        assert!(c.poles.iter().all(|p| p.order == 2 && p.residue == 0.0));
        assert_eq!(c.degree, 0);
        assert_eq!(c.genus, 1);
        assert_eq!(chi, 0);
    }

    #[test]
    fn single_mirror_sphere() {
        let (s, cycles, c, chi) = full(&single());
        assert_eq!(s.sheet_count(), 2);
        assert_eq!(s.gluings, vec![vec![1, 0]]);
        assert_eq!(cycles.len(), 2);
        assert_eq!(c.degree, -2);
        assert_eq!(c.genus, 0);
        assert_eq!(chi, 2);
    }

    #[test]
    fn three_parallel_genus_two() {
        let (s, cycles, c, chi) = full(&three_parallel());
        assert_eq!(s.sheet_count(), 2);
        assert_eq!(s.gluings, vec![vec![1, 0]; 3]);
        assert_eq!(cycles.len(), 6);
        assert_eq!(c.zeros.len(), 6);
        assert_eq!(c.degree, 2);
        assert_eq!(c.genus, 2);
        assert_eq!(chi, -2);
    }

    #[test]
    fn every_incidence_is_covered_once() {
        let scene = Scene::new(
            vec![
                Mirror::new(Vec2::new(0.0, 0.0), 1.0, turn(1, 3)),
                Mirror::new(Vec2::new(3.0, 0.0), 1.0, turn(1, 4)),
                Mirror::new(Vec2::new(0.0, 3.0), 1.0, turn(5, 6)),
            ],
            Vec2::new(-2.0, -2.0),
        );
        let s = build_surface(&scene, DEFAULT_MAX_GROUP_ORDER).unwrap();
        let cycles = cone_cycles(&s);
        let mut seen = std::collections::HashSet::new();
        for c in &cycles {
            for &i in &c.sheet_cycle {
                assert!(seen.insert((c.slit, c.endpoint, i)));
            }
        }
        assert_eq!(seen.len(), 2 * s.slit_count() * s.sheet_count());
        assert_eq!(cycles.len(), s.slit_count() * s.sheet_count());
    }

    #[test]
    fn inconsistent_cycles_are_reported() {
        let s = build_surface(&single(), DEFAULT_MAX_GROUP_ORDER).unwrap();
        let bogus = vec![ConeCycle {
            slit: 0,
            endpoint: Endpoint::First,
            sheet_cycle: vec![0, 1],
        }];
        assert!(matches!(census(&s, &bogus), Err(UnfoldError::BadGenus { .. })));
        let c = census(&s, &cone_cycles(&s)).unwrap();
        let wrong = SurfaceCensus { genus: 1, ..c };
        assert!(matches!(
            euler_check(&s, &wrong),
            Err(UnfoldError::EulerMismatch { chi: 2, genus: 1 })
        ));
    }

    #[test]
    fn dark_angle_totals() {
        let (_, _, toy_census, _) = full(&toy());
        assert!((total_dark_angle(&toy_census, 2.0 * PI) - 6.0 * PI).abs() < 1e-12);
        let (_, _, single_census, _) = full(&single());
        assert!((total_dark_angle(&single_census, 2.0 * PI) - 2.0 * PI).abs() < 1e-12);
        let lone = SurfaceCensus {
            m: 1,
            n_slits: 0,
            zeros: vec![],
            poles: vec![],
            degree: -2,
            genus: 0,
        };
        assert_eq!(total_dark_angle(&lone, 2.0 * PI), 0.0);
    }

    mod props {
        use super::*;
        use crate::scene::{random_scene, RandomSceneParams};
        use proptest::prelude::*;
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]
            #[test]
            fn census_agrees_with_euler(seed in any::<u64>(), mirrors in 1usize..5) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let params = RandomSceneParams { mirrors, max_den: 6, ..Default::default() };
                let scene = random_scene(&mut rng, &params);
                let s = build_surface(&scene, 60_000).unwrap();
                for g in &s.gluings {
                    for (i, &j) in g.iter().enumerate() {
                        prop_assert_eq!(g[j], i);
                    }
                }
                let cycles = cone_cycles(&s);
                prop_assert!(cycles.iter().all(|c| c.len() == 2));
                let c = census(&s, &cycles).unwrap();
                prop_assert_eq!(c.zeros.len(), s.slit_count() * s.sheet_count());
                prop_assert_eq!(c.zero_order_sum() - 2 * c.m as i64, 2 * c.genus - 2);
                prop_assert!(c.genus >= 0);
                prop_assert_eq!(euler_characteristic(&s), 2 - 2 * c.genus);
            }
        }
    }
}
