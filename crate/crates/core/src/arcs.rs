//! Open arcs of the direction circle and finite unions of them.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::exact_angle::normalize_radians;

/// Counterclockwise open arc from `start` to `end`. `start == end` is the
/// full circle; arcs may wrap through 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Arc {
    pub start: f64,
    pub end: f64,
}

impl Arc {
    pub fn new(start: f64, end: f64) -> Self {
        Arc {
            start: normalize_radians(start),
            end: normalize_radians(end),
        }
    }

    pub fn full() -> Self {
        Arc { start: 0.0, end: 0.0 }
    }

    pub fn is_full(&self) -> bool {
        self.start == self.end
    }

    /// `(end − start) mod 2π`, with the full circle measuring 2π.
    pub fn measure(&self) -> f64 {
        if self.is_full() {
            TAU
        } else {
            normalize_radians(self.end - self.start)
        }
    }

    pub fn contains(&self, theta: f64) -> bool {
        if self.is_full() {
            return true;
        }
        let d = normalize_radians(theta - self.start);
        d > 0.0 && d < self.measure()
    }

    pub fn midpoint(&self) -> f64 {
        normalize_radians(self.start + 0.5 * self.measure())
    }

    /// Point at fraction `u ∈ [0, 1]` along the arc.
    pub fn at(&self, u: f64) -> f64 {
        normalize_radians(self.start + u * self.measure())
    }

    /// Same midpoint, new measure.
    pub fn resized(&self, measure: f64) -> Arc {
        let mid = self.midpoint();
        Arc::new(mid - 0.5 * measure, mid + 0.5 * measure)
    }

    /// Arc grown by `eps` at both ends (full circle if it would overlap itself).
    pub fn expanded(&self, eps: f64) -> Arc {
        if self.measure() + 2.0 * eps >= TAU {
            Arc::full()
        } else {
            Arc::new(self.start - eps, self.end + eps)
        }
    }
}

/// A finite union of arcs kept as sorted, disjoint linear intervals of `[0, 2π]`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ArcSet {
    intervals: Vec<(f64, f64)>,
}

impl ArcSet {
    pub fn empty() -> Self {
        ArcSet::default()
    }

    pub fn from_arc(arc: &Arc) -> Self {
        let mut set = ArcSet::empty();
        set.push_arc(arc);
        set.normalize();
        set
    }

    pub fn from_arcs<'a>(arcs: impl IntoIterator<Item = &'a Arc>) -> Self {
        let mut set = ArcSet::empty();
        for a in arcs {
            set.push_arc(a);
        }
        set.normalize();
        set
    }

    fn push_arc(&mut self, arc: &Arc) {
        if arc.is_full() {
            self.intervals.push((0.0, TAU));
        } else if arc.start < arc.end {
            self.intervals.push((arc.start, arc.end));
        } else {
            self.intervals.push((arc.start, TAU));
            self.intervals.push((0.0, arc.end));
        }
    }

    fn normalize(&mut self) {
        self.intervals.retain(|&(a, b)| b > a);
        self.intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(self.intervals.len());
        for &(a, b) in &self.intervals {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        self.intervals = merged;
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn union(&self, other: &ArcSet) -> ArcSet {
        let mut out = ArcSet {
            intervals: self.intervals.iter().chain(&other.intervals).copied().collect(),
        };
        out.normalize();
        out
    }

    pub fn intersection(&self, other: &ArcSet) -> ArcSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a0, a1) = self.intervals[i];
            let (b0, b1) = other.intervals[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if hi > lo {
                out.push((lo, hi));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        ArcSet { intervals: out }
    }

    pub fn difference(&self, other: &ArcSet) -> ArcSet {
        let mut out = Vec::new();
        for &(a0, a1) in &self.intervals {
            let mut cur = a0;
            for &(b0, b1) in &other.intervals {
                if b1 <= cur {
                    continue;
                }
                if b0 >= a1 {
                    break;
                }
                if b0 > cur {
                    out.push((cur, b0));
                }
                cur = cur.max(b1);
                if cur >= a1 {
                    break;
                }
            }
            if cur < a1 {
                out.push((cur, a1));
            }
        }
        ArcSet { intervals: out }
    }

    /// Maximal arcs, rejoining pieces that meet across angle 0.
    pub fn to_arcs(&self) -> Vec<Arc> {
        let iv = &self.intervals;
        if iv.is_empty() {
            return vec![];
        }
        if iv.len() == 1 && iv[0].0 <= 0.0 && iv[0].1 >= TAU {
            return vec![Arc::full()];
        }
        let wraps = iv.len() > 1 && iv[0].0 <= 0.0 && iv[iv.len() - 1].1 >= TAU;
        let mut arcs = Vec::new();
        let inner = if wraps { &iv[1..iv.len() - 1] } else { &iv[..] };
        for &(a, b) in inner {
            arcs.push(Arc::new(a, b));
        }
        if wraps {
            arcs.push(Arc::new(iv[iv.len() - 1].0, iv[0].1));
        }
        arcs.sort_by(|x, y| x.start.total_cmp(&y.start));
        arcs
    }

    /// The largest interval of the set as an arc, rejoined across 0.
    pub fn largest_arc(&self) -> Option<Arc> {
        self.to_arcs()
            .into_iter()
            .max_by(|a, b| a.measure().total_cmp(&b.measure()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn measures_and_membership() {
        let a = Arc::new(1.75 * PI, 1.25 * PI);
        assert!((a.measure() - 1.5 * PI).abs() < 1e-12);
        assert!(a.contains(0.0));
        assert!(a.contains(0.0 + TAU));
        assert!(a.contains(-0.1));
        assert!(!a.contains(1.5 * PI));
        assert!(!a.contains(1.25 * PI));
        assert!(Arc::full().contains(3.0));
        assert_eq!(Arc::full().measure(), TAU);
    }

    #[test]
    fn resizing_keeps_midpoint() {
        let a = Arc::new(0.25 * PI, 1.75 * PI);
        let b = a.resized(PI - 1e-6);
        assert!((b.midpoint() - a.midpoint()).abs() < 1e-12);
        assert!((b.measure() - (PI - 1e-6)).abs() < 1e-12);
    }

    #[test]
    fn wrapping_set_operations() {
        let direct = ArcSet::from_arc(&Arc::new(1.75 * PI, 1.25 * PI));
        let reflected = ArcSet::from_arc(&Arc::new(1.25 * PI, 1.75 * PI));
        assert!(direct.intersection(&reflected).is_empty());
        let all = direct.union(&reflected);
        assert!((all.measure() - TAU).abs() < 1e-12);

        let img = ArcSet::from_arc(&Arc::new(0.25 * PI, 0.75 * PI));
        let left = direct.difference(&img);
        let arcs = left.to_arcs();
        assert_eq!(arcs.len(), 2);
        let wrap = arcs.iter().find(|a| a.start > a.end).unwrap();
        assert!((wrap.start - 1.75 * PI).abs() < 1e-12 && (wrap.end - 0.25 * PI).abs() < 1e-12);
    }

    #[test]
    fn full_circle_round_trip() {
        let s = ArcSet::from_arc(&Arc::full());
        assert_eq!(s.to_arcs(), vec![Arc::full()]);
        let s = ArcSet::from_arcs(&[Arc::new(0.0, PI), Arc::new(PI, 0.0)]);
        assert_eq!(s.to_arcs(), vec![Arc::full()]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn any_arc() -> impl Strategy<Value = Arc> {
            (0.0..TAU, 1e-3..TAU - 1e-3).prop_map(|(s, m)| Arc::new(s, s + m))
        }

        proptest! {
            #[test]
            fn difference_is_disjoint_from_subtrahend(
                a in proptest::collection::vec(any_arc(), 1..5),
                b in proptest::collection::vec(any_arc(), 1..5),
            ) {
                let sa = ArcSet::from_arcs(&a);
                let sb = ArcSet::from_arcs(&b);
                let d = sa.difference(&sb);
                prop_assert!(d.intersection(&sb).measure() <= 1e-12);
                let total = d.measure() + sa.intersection(&sb).measure();
                prop_assert!((total - sa.measure()).abs() < 1e-9);
            }

            #[test]
            fn arcs_round_trip_measure(a in proptest::collection::vec(any_arc(), 1..6)) {
                let s = ArcSet::from_arcs(&a);
                let back = ArcSet::from_arcs(&s.to_arcs());
                prop_assert!((back.measure() - s.measure()).abs() < 1e-9);
            }
        }
    }
}
