//! Exact rational evaluation of weighted aggregates.
//!
//! Every finite `f64` is a dyadic rational, so input values convert to
//! [`Q`] without loss. Hyperplanes, intersection points and the scores at
//! those points are then computed with no rounding at all, which keeps tie
//! events (three lines through one point, a line through a corner) exact.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::model::{rank_by, InputSet, RankLabel, WeightVector};

pub type Q = BigRational;

/// Exact conversion of a finite float.
pub fn q(value: f64) -> Q {
    Q::from_float(value).expect("finite value")
}

pub fn qi(value: i64) -> Q {
    Q::from_integer(BigInt::from(value))
}

pub fn ratio(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(value: &Q) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Formats as `p/q`, or `p` for integers.
pub fn format_q(value: &Q) -> String {
    value.to_string()
}

pub fn parse_q(text: &str) -> Option<Q> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => text.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

/// A point of the weight set in projected coordinates `(λ1, λ2)`, with
/// `λ3 = 1 − λ1 − λ2` implied.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexPoint {
    pub x: Q,
    pub y: Q,
}

impl SimplexPoint {
    pub fn new(x: Q, y: Q) -> Self {
        SimplexPoint { x, y }
    }

    pub fn from_ints(x: (i64, i64), y: (i64, i64)) -> Self {
        SimplexPoint::new(ratio(x.0, x.1), ratio(y.0, y.1))
    }

    /// The three corners `(1,0,0)`, `(0,1,0)`, `(0,0,1)`.
    pub fn corners() -> [SimplexPoint; 3] {
        [
            SimplexPoint::new(Q::one(), Q::zero()),
            SimplexPoint::new(Q::zero(), Q::one()),
            SimplexPoint::new(Q::zero(), Q::zero()),
        ]
    }

    /// Exact projection of a weight vector (its third component is taken as
    /// `1 − λ1 − λ2`).
    pub fn from_weight(w: &WeightVector) -> Self {
        let [a, b, _] = w.lambda();
        SimplexPoint::new(q(a), q(b))
    }

    pub fn lambda3(&self) -> Q {
        Q::one() - &self.x - &self.y
    }

    pub fn barycentric(&self) -> [Q; 3] {
        [self.x.clone(), self.y.clone(), self.lambda3()]
    }

    pub fn in_simplex(&self) -> bool {
        !self.x.is_negative() && !self.y.is_negative() && !self.lambda3().is_negative()
    }

    pub fn is_corner(&self) -> bool {
        let l3 = self.lambda3();
        let ones = [&self.x, &self.y, &l3].iter().filter(|v| v.is_one()).count();
        ones == 1 && self.in_simplex()
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [to_f64(&self.x), to_f64(&self.y)]
    }

    /// Float weight vector. Components are clamped at zero so rounding never
    /// produces a tiny negative weight.
    pub fn weight(&self) -> WeightVector {
        let [a, b] = self.to_f64();
        let c = to_f64(&self.lambda3());
        WeightVector::normalized([a.max(0.0), b.max(0.0), c.max(0.0)])
            .expect("point inside the simplex")
    }

    pub fn midpoint(&self, other: &SimplexPoint) -> SimplexPoint {
        let half = ratio(1, 2);
        SimplexPoint::new(
            (&self.x + &other.x) * &half,
            (&self.y + &other.y) * &half,
        )
    }
}

impl fmt::Display for SimplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Input values of a three-input set as exact rationals, stored per item as
/// `(v3, v1 − v3, v2 − v3)` so a score is one multiply-add pair.
#[derive(Debug, Clone)]
pub struct ExactScores {
    rows: Vec<[Q; 3]>,
}

impl ExactScores {
    pub fn new(input_set: &InputSet) -> crate::Result<Self> {
        let [a, b, c] = input_set.triple()?;
        let rows = (0..input_set.n_items())
            .map(|i| {
                let v1 = q(a.values()[i]);
                let v2 = q(b.values()[i]);
                let v3 = q(c.values()[i]);
                [v3.clone(), &v1 - &v3, &v2 - &v3]
            })
            .collect();
        Ok(ExactScores { rows })
    }

    pub fn n_items(&self) -> usize {
        self.rows.len()
    }

    /// Aggregate scores at `p`. Points outside the simplex are allowed; the
    /// aggregate is affine in `(λ1, λ2)`.
    pub fn at(&self, p: &SimplexPoint) -> Vec<Q> {
        self.rows
            .iter()
            .map(|[c, dx, dy]| c + dx * &p.x + dy * &p.y)
            .collect()
    }
}

/// Ranked label of exact scores.
pub fn rank_exact(scores: &[Q]) -> RankLabel {
    rank_by(scores.len(), |a, b| scores[a].cmp(&scores[b]))
}

/// Label just off a point `m` in the direction of `q`: items are ordered by
/// their score at `m`, and ties at `m` are broken by the score at `q`.
/// Valid because the aggregate is affine along the segment.
pub fn rank_perturbed(at: &[Q], toward: &[Q]) -> RankLabel {
    rank_by(at.len(), |a, b| {
        at[a].cmp(&at[b]).then_with(|| toward[a].cmp(&toward[b]))
    })
}

/// Whether `label` is consistent with `scores` under non-strict ordering:
/// items a label ranks strictly better are no worse, tied items are equal.
pub fn consistent(label: &RankLabel, scores: &[Q]) -> bool {
    let groups = label.tie_groups();
    for group in groups {
        let first = &scores[group[0]];
        if group[1..].iter().any(|&i| scores[i] != *first) {
            return false;
        }
    }
    groups
        .windows(2)
        .all(|w| scores[w[0][0]] <= scores[w[1][0]])
}

const FILTER_EPS: f64 = 8.0 * f64::EPSILON;

/// Rank of `Σ w_k v^k` where the float weights `w` are taken as exact
/// values (they need not sum to one; ranks are scale invariant).
///
/// Comparisons are decided in floating point when the gap exceeds a rounding
/// error bound and are recomputed in rationals otherwise, so exact ties are
/// reported as ties.
pub fn rank_at_weights(input_set: &InputSet, w: [f64; 3]) -> RankLabel {
    let n = input_set.n_items();
    let inputs = input_set.inputs();
    let (sums, bounds): (Vec<f64>, Vec<f64>) = (0..n)
        .map(|i| {
            let mut s = 0.0;
            let mut mag = 0.0;
            for k in 0..3 {
                let t = w[k] * inputs[k].values()[i];
                s += t;
                mag += t.abs();
            }
            (s, FILTER_EPS * mag + f64::MIN_POSITIVE)
        })
        .unzip();
    let exact = |i: usize| -> Q {
        (0..3)
            .map(|k| q(w[k]) * q(inputs[k].values()[i]))
            .fold(Q::zero(), |acc, t| acc + t)
    };
    rank_by(n, |a, b| {
        let gap = sums[a] - sums[b];
        if gap.abs() > bounds[a] + bounds[b] {
            gap.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
        } else {
            exact(a).cmp(&exact(b))
        }
    })
}
