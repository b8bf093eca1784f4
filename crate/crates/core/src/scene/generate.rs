//! Random valid scenes for property tests and benchmarks.

use rand::Rng;

use super::{Mirror, Scene};
use crate::exact_angle::RationalTurn;
use crate::geometry::{segment_segment_distance, Vec2};

#[derive(Debug, Clone)]
pub struct RandomSceneParams {
    pub mirrors: usize,
    /// Largest denominator of a mirror angle (units of π).
    pub max_den: i64,
    /// Half-width of the square holding anchors and the source.
    pub extent: f64,
    pub min_length: f64,
    pub max_length: f64,
    /// Clearance kept between mirrors and around the source.
    pub clearance: f64,
}

impl Default for RandomSceneParams {
    fn default() -> Self {
        RandomSceneParams {
            mirrors: 3,
            max_den: 12,
            extent: 3.0,
            min_length: 0.3,
            max_length: 2.0,
            clearance: 0.05,
        }
    }
}

/// Rejection-samples disjoint mirrors with random rational angles, then a
/// source clear of all of them. Always returns a scene that passes
/// [`Scene::validate`].
pub fn random_scene<R: Rng + ?Sized>(rng: &mut R, params: &RandomSceneParams) -> Scene {
    let mut mirrors: Vec<Mirror> = Vec::with_capacity(params.mirrors);
    let e = params.extent;
    while mirrors.len() < params.mirrors {
        let den = rng.gen_range(1..=params.max_den.max(1));
        let num = rng.gen_range(0..2 * den);
        let angle = RationalTurn::new(num, den).expect("positive denominator");
        let anchor = Vec2::new(rng.gen_range(-e..e), rng.gen_range(-e..e));
        let length = rng.gen_range(params.min_length..=params.max_length);
        let candidate = Mirror::new(anchor, length, angle);
        let (a, b) = candidate.endpoints();
        let clear = mirrors.iter().all(|m| {
            let (c, d) = m.endpoints();
            segment_segment_distance(a, b, c, d) >= params.clearance
        });
        if clear {
            mirrors.push(candidate);
        }
    }
    loop {
        let source = Vec2::new(rng.gen_range(-e..e), rng.gen_range(-e..e));
        if mirrors.iter().all(|m| m.distance_to_point(source) >= params.clearance) {
            return Scene::new(mirrors, source);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_scenes_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=6 {
            for _ in 0..40 {
                let s = random_scene(
                    &mut rng,
                    &RandomSceneParams {
                        mirrors: n,
                        ..Default::default()
                    },
                );
                assert_eq!(s.mirrors.len(), n);
                let report = s.validate();
                assert!(report.valid, "{report:?}");
                let k = s.enclosing_circle();
                let worst = s.key_points().iter().map(|p| p.distance(k.center)).fold(0.0, f64::max);
                assert!(worst / k.radius <= 0.8 + 1e-12);
            }
        }
    }
}
