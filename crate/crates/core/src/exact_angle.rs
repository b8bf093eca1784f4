//! Exact direction arithmetic.
//!
//! Directions that are rational multiples of π are stored as reduced
//! fractions in units of π, normalized into `[0, 2)`. The finite group
//! generated by the mirror reflections acts on the direction circle by
//! maps of the form `θ ↦ s·θ + c·π` with `s = ±1` and `c` rational.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::f64::consts::{PI, TAU};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Default upper bound on the order of a generated reflection group.
pub const DEFAULT_MAX_GROUP_ORDER: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AngleError {
    #[error("zero denominator in rational angle")]
    ZeroDenominator,
    #[error("cannot parse rational angle {0:?}; expected `p/q` or an integer")]
    Syntax(String),
    #[error("reflection group needs at least one mirror angle")]
    NoGenerators,
    #[error("reflection group order exceeds the cap of {cap}")]
    GroupTooLarge { cap: usize },
}

/// An angle `(num/den)·π`, reduced and normalized modulo 2π.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalTurn {
    num: BigInt,
    den: BigInt,
}

impl RationalTurn {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, AngleError> {
        let num = num.into();
        let den = den.into();
        if den.is_zero() {
            return Err(AngleError::ZeroDenominator);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(mut num: BigInt, mut den: BigInt) -> Self {
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if !g.is_one() && !g.is_zero() {
            num /= &g;
            den /= &g;
        }
        // `num/den mod 2` keeps the fraction reduced: gcd(num mod 2den, den) = gcd(num, den).
        let period = &den * 2;
        num = num.mod_floor(&period);
        if num.is_zero() {
            den = BigInt::one();
        }
        RationalTurn { num, den }
    }

    pub fn zero() -> Self {
        RationalTurn {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The value in units of π, in `[0, 2)`.
    pub fn turns_of_pi(&self) -> f64 {
        match (self.num.to_f64(), self.den.to_f64()) {
            (Some(n), Some(d)) if d.is_finite() => n / d,
            _ => {
                // Huge denominators: scale both down before converting.
                let shift = self.den.bits().saturating_sub(60);
                let n = (&self.num >> shift).to_f64().unwrap_or(0.0);
                let d = (&self.den >> shift).to_f64().unwrap_or(1.0);
                n / d
            }
        }
    }

    /// The angle in radians, in `[0, 2π)`.
    pub fn radians(&self) -> f64 {
        normalize_radians(self.turns_of_pi() * PI)
    }

    pub fn add(&self, other: &RationalTurn) -> RationalTurn {
        let num = &self.num * &other.den + &other.num * &self.den;
        Self::canonical(num, &self.den * &other.den)
    }

    pub fn neg(&self) -> RationalTurn {
        Self::canonical(-&self.num, self.den.clone())
    }

    pub fn double(&self) -> RationalTurn {
        Self::canonical(&self.num * 2, self.den.clone())
    }

    /// `"p/q"` in units of π.
    pub fn fraction_string(&self) -> String {
        if self.den.is_one() {
            self.num.to_string()
        } else {
            format!("{}/{}", self.num, self.den)
        }
    }

    /// Parses `"p/q"` or `"p"` (units of π).
    pub fn parse(text: &str) -> Result<Self, AngleError> {
        let syntax = || AngleError::Syntax(text.to_string());
        let (n, d) = match text.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text.trim(), "1"),
        };
        let num: BigInt = n.parse().map_err(|_| syntax())?;
        let den: BigInt = d.parse().map_err(|_| syntax())?;
        Self::new(num, den)
    }
}

impl Ord for RationalTurn {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for RationalTurn {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Prints as a multiple of π, e.g. `0`, `π`, `2π/3`, `3π/2`.
impl fmt::Display for RationalTurn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_zero() {
            return write!(f, "0");
        }
        if !self.num.is_one() {
            write!(f, "{}", self.num)?;
        }
        write!(f, "π")?;
        if !self.den.is_one() {
            write!(f, "/{}", self.den)?;
        }
        Ok(())
    }
}

impl fmt::Debug for RationalTurn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Reduces an angle in radians into `[0, 2π)`.
pub fn normalize_radians(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Shortest distance between two directions on the circle, in `[0, π]`.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = normalize_radians(a - b);
    d.min(TAU - d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    pub fn sign(self) -> i32 {
        match self {
            Parity::Plus => 1,
            Parity::Minus => -1,
        }
    }

    pub fn times(self, other: Parity) -> Parity {
        if self == other {
            Parity::Plus
        } else {
            Parity::Minus
        }
    }
}

/// The circle map `θ ↦ s·θ + c·π`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub s: Parity,
    pub c: RationalTurn,
}

impl GroupElement {
    pub fn new(s: Parity, c: RationalTurn) -> Self {
        GroupElement { s, c }
    }

    pub fn identity() -> Self {
        GroupElement {
            s: Parity::Plus,
            c: RationalTurn::zero(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.s == Parity::Plus && self.c.is_zero()
    }

    /// Reflection of directions in a line at angle `r·π`: `θ ↦ 2rπ − θ`.
    pub fn mirror_reflection(r: &RationalTurn) -> Self {
        GroupElement {
            s: Parity::Minus,
            c: r.double(),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let shifted = match self.s {
            Parity::Plus => other.c.clone(),
            Parity::Minus => other.c.neg(),
        };
        GroupElement {
            s: self.s.times(other.s),
            c: shifted.add(&self.c),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        let c = match self.s {
            Parity::Plus => self.c.neg(),
            Parity::Minus => self.c.clone(),
        };
        GroupElement { s: self.s, c }
    }

    pub fn apply(&self, theta: f64) -> f64 {
        normalize_radians(self.s.sign() as f64 * theta + self.c.radians())
    }

    /// Exact image of a rational direction.
    pub fn apply_exact(&self, theta: &RationalTurn) -> RationalTurn {
        let t = match self.s {
            Parity::Plus => theta.clone(),
            Parity::Minus => theta.neg(),
        };
        t.add(&self.c)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.s {
            Parity::Plus => "",
            Parity::Minus => "-",
        };
        write!(f, "θ ↦ {}θ + {}", sign, self.c)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.s.sign(), self.c)
    }
}

/// The finite dihedral group generated by the mirror reflections.
#[derive(Debug, Clone)]
pub struct ReflectionGroup {
    /// Sorted: orientation-preserving elements first, then by offset.
    elements: Vec<GroupElement>,
    generators: Vec<GroupElement>,
}

impl ReflectionGroup {
    pub fn generate<'a>(
        mirror_angles: impl IntoIterator<Item = &'a RationalTurn>,
        max_order: usize,
    ) -> Result<Self, AngleError> {
        let mut generators: Vec<GroupElement> =
            mirror_angles.into_iter().map(GroupElement::mirror_reflection).collect();
        generators.sort();
        generators.dedup();
        if generators.is_empty() {
            return Err(AngleError::NoGenerators);
        }

        let mut seen: HashSet<GroupElement> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(GroupElement::identity());
        queue.push_back(GroupElement::identity());
        while let Some(g) = queue.pop_front() {
            for gen in &generators {
                let h = gen.compose(&g);
                if seen.insert(h.clone()) {
                    if seen.len() > max_order {
                        return Err(AngleError::GroupTooLarge { cap: max_order });
                    }
                    queue.push_back(h);
                }
            }
        }
        let mut elements: Vec<GroupElement> = seen.into_iter().collect();
        elements.sort();
        Ok(ReflectionGroup { elements, generators })
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    /// One reflection per distinct mirror angle.
    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Length of the orbit of a generic direction; generic stabilizers are trivial.
    pub fn generic_orbit_size(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.elements.binary_search(g).ok()
    }
}
