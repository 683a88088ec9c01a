//! Separating hyperplanes between item pairs and the equilateral transform.
//!
//! For items `a`, `b` let `δ_i = v^i_a − v^i_b`. Substituting
//! `λ3 = 1 − λ1 − λ2` into `Σ λ_i δ_i = 0` gives the line
//! `(δ1 − δ3) λ1 + (δ2 − δ3) λ2 + δ3 = 0` in projected coordinates. Where
//! the left-hand side is negative `a` has the lower aggregate and is ranked
//! better.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{q, Q, SimplexPoint};
use crate::model::{InputSet, WeightVector};

/// Tolerance of [`side_of`] in float mode.
pub const SIDE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Delta {
    pub pair: (usize, usize),
    pub d: [Q; 3],
}

impl Delta {
    pub fn new(pair: (usize, usize), d: [Q; 3]) -> Self {
        Delta { pair, d }
    }

    pub fn from_ints(pair: (usize, usize), d: [i64; 3]) -> Self {
        Delta::new(pair, d.map(crate::exact::qi))
    }

    /// Number of inputs in which the two items are tied.
    pub fn zero_count(&self) -> usize {
        self.d.iter().filter(|x| x.is_zero()).count()
    }

    pub fn is_disagreeing(&self) -> bool {
        self.d.iter().any(Signed::is_negative) && self.d.iter().any(Signed::is_positive)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PairClass {
    /// Every input that separates the items agrees; `a_better` tells which
    /// way.
    Unanimous { a_better: bool },
    Disagreeing(Delta),
    /// Tied in all three inputs.
    Degenerate,
}

pub fn delta(input_set: &InputSet, a: usize, b: usize) -> Result<Delta> {
    input_set.triple()?;
    let d = [0, 1, 2].map(|k| q(input_set.value(k, a)) - q(input_set.value(k, b)));
    Ok(Delta::new((a, b), d))
}

pub fn classify_pair(input_set: &InputSet, a: usize, b: usize) -> Result<PairClass> {
    if a == b {
        return Err(Error::input("cannot classify an item against itself"));
    }
    let d = delta(input_set, a, b)?;
    Ok(classify_delta(d))
}

pub fn classify_delta(d: Delta) -> PairClass {
    if d.zero_count() == 3 {
        PairClass::Degenerate
    } else if d.is_disagreeing() {
        PairClass::Disagreeing(d)
    } else {
        PairClass::Unanimous {
            a_better: d.d.iter().any(Signed::is_negative),
        }
    }
}

/// `a·λ1 + b·λ2 + c = 0` in projected coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    pub a: Q,
    pub b: Q,
    pub c: Q,
}

impl Line {
    pub fn new(a: Q, b: Q, c: Q) -> Self {
        Line { a, b, c }
    }

    pub fn eval(&self, p: &SimplexPoint) -> Q {
        &self.a * &p.x + &self.b * &p.y + &self.c
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        crate::exact::to_f64(&self.a) * x + crate::exact::to_f64(&self.b) * y + crate::exact::to_f64(&self.c)
    }

    pub fn contains(&self, p: &SimplexPoint) -> bool {
        self.eval(p).is_zero()
    }

    /// Vertical in projected coordinates (`b = 0`): `λ1 = −c / a`.
    pub fn is_vertical(&self) -> bool {
        self.b.is_zero()
    }

    /// Scales so the first nonzero of `(a, b)` is one. Returns the scaled line
    /// and whether the scale factor was negative (which swaps the sides).
    pub fn normalized(&self) -> (Line, bool) {
        let lead = if self.a.is_zero() { &self.b } else { &self.a };
        assert!(!lead.is_zero(), "line with a = b = 0");
        let flipped = lead.is_negative();
        let lead = lead.clone();
        (
            Line::new(&self.a / &lead, &self.b / &lead, &self.c / &lead),
            flipped,
        )
    }

    /// Intersection with another line, if they are not parallel.
    pub fn intersect(&self, other: &Line) -> Option<SimplexPoint> {
        let det = &self.a * &other.b - &self.b * &other.a;
        if det.is_zero() {
            return None;
        }
        let x = (&self.b * &other.c - &self.c * &other.b) / &det;
        let y = (&self.c * &other.a - &self.a * &other.c) / &det;
        Some(SimplexPoint::new(x, y))
    }

    /// The three edges of the weight set: `λ2 = 0`, `λ1 = 0`, `λ1 + λ2 = 1`.
    pub fn simplex_edges() -> [Line; 3] {
        use crate::exact::qi;
        [
            Line::new(qi(0), qi(1), qi(0)),
            Line::new(qi(1), qi(0), qi(0)),
            Line::new(qi(1), qi(1), qi(-1)),
        ]
    }
}

pub fn line_of(delta: &Delta) -> Result<Line> {
    if delta.zero_count() == 3 {
        return Err(Error::Geometry(format!(
            "items {:?} are tied in every input; no separating line",
            delta.pair
        )));
    }
    let [d1, d2, d3] = &delta.d;
    let line = Line::new(d1 - d3, d2 - d3, d3.clone());
    if line.a.is_zero() && line.b.is_zero() {
        return Err(Error::Geometry(format!(
            "items {:?} differ equally in every input; no separating line",
            delta.pair
        )));
    }
    Ok(line)
}

/// The two points where the separating line leaves the weight set.
///
/// Candidates are the crossings with `λ2 = 0`, `λ1 = 0` and `λ3 = 0`; a
/// division by zero counts as infinite. The valid candidates (inside the
/// simplex) are deduplicated.
pub fn endpoints_of(delta: &Delta) -> Result<[SimplexPoint; 2]> {
    if !delta.is_disagreeing() {
        return Err(Error::Geometry(format!(
            "pair {:?} does not disagree; its line misses the interior",
            delta.pair
        )));
    }
    let [d1, d2, d3] = &delta.d;
    let div = |num: Q, den: Q| (!den.is_zero()).then(|| num / den);
    let mut candidates = Vec::with_capacity(3);
    if let Some(l1) = div(-d3.clone(), d1 - d3) {
        candidates.push(SimplexPoint::new(l1, Q::zero()));
    }
    if let Some(l2) = div(-d3.clone(), d2 - d3) {
        candidates.push(SimplexPoint::new(Q::zero(), l2));
    }
    if let Some(l1) = div(-d2.clone(), d1 - d2) {
        let l2 = Q::from_integer(1.into()) - &l1;
        candidates.push(SimplexPoint::new(l1, l2));
    }
    let mut valid: Vec<SimplexPoint> = Vec::new();
    for c in candidates {
        if c.in_simplex() && !valid.contains(&c) {
            valid.push(c);
        }
    }
    if valid.len() < 2 {
        // Fallback: intersect the line with each simplex edge directly.
        let line = line_of(delta)?;
        for edge in Line::simplex_edges() {
            if let Some(p) = line.intersect(&edge) {
                if p.in_simplex() && !valid.contains(&p) {
                    valid.push(p);
                }
            }
        }
    }
    match valid.len() {
        2 => {
            valid.sort();
            let second = valid.pop().unwrap();
            let first = valid.pop().unwrap();
            Ok([first, second])
        }
        k => Err(Error::Geometry(format!(
            "pair {:?}: {k} distinct endpoints inside the simplex",
            delta.pair
        ))),
    }
}

/// Projected `(λ1, λ2)` to the unit-side equilateral triangle: input 1 at
/// `(1/2, 0)`, input 2 on top at `(0, √3/2)`, input 3 at `(−1/2, 0)`.
pub fn to_equilateral(lambda: &WeightVector) -> [f64; 2] {
    let [l1, l2, _] = lambda.lambda();
    projected_to_equilateral([l1, l2])
}

pub fn projected_to_equilateral([l1, l2]: [f64; 2]) -> [f64; 2] {
    [l1 - 0.5 * (1.0 - l2), l2 * 3f64.sqrt() / 2.0]
}

/// Inverse of [`projected_to_equilateral`].
pub fn equilateral_to_projected([x, y]: [f64; 2]) -> [f64; 2] {
    let l2 = 2.0 * y / 3f64.sqrt();
    [x + 0.5 * (1.0 - l2), l2]
}

/// Area scale of the equilateral transform relative to projected coordinates.
pub fn equilateral_area_factor() -> f64 {
    3f64.sqrt() / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `a` is ranked strictly better than `b`.
    Below,
    On,
    /// `b` is ranked strictly better than `a`.
    Above,
}

/// Which side of `line` (as returned by [`line_of`]) the weight lies on.
pub fn side_of(line: &Line, lambda: &WeightVector) -> Side {
    let [l1, l2, _] = lambda.lambda();
    let v = line.eval_f64(l1, l2);
    if v.abs() <= SIDE_TOLERANCE {
        Side::On
    } else if v < 0.0 {
        Side::Below
    } else {
        Side::Above
    }
}

/// A deduplicated separating line with all item pairs that share it.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    /// Oriented pairs: for `(a, b)`, `line.eval < 0` means `a` beats `b`.
    pub pairs: Vec<(usize, usize)>,
    /// Normalized line (first nonzero of `(a, b)` is one).
    pub line: Line,
    pub endpoints: [SimplexPoint; 2],
    /// The input ranking the first pair against the other two, if the two
    /// nonzero signs do not split evenly.
    pub disagreeing_input: Option<usize>,
}

fn disagreeing_input(delta: &Delta) -> Option<usize> {
    let neg = delta.d.iter().filter(|x| x.is_negative()).count();
    let pos = delta.d.iter().filter(|x| x.is_positive()).count();
    let minority_negative = match (neg, pos) {
        (1, 2) => true,
        (2, 1) => false,
        _ => return None,
    };
    delta.d.iter().position(|x| {
        if minority_negative {
            x.is_negative()
        } else {
            x.is_positive()
        }
    })
}

/// All separating hyperplanes of a three-input set, merged by line.
pub fn hyperplanes(input_set: &InputSet) -> Result<Vec<Hyperplane>> {
    let n = input_set.n_items();
    let mut by_line: BTreeMap<Line, usize> = BTreeMap::new();
    let mut out: Vec<Hyperplane> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let PairClass::Disagreeing(d) = classify_pair(input_set, a, b)? else {
                continue;
            };
            let (line, flipped) = line_of(&d)?.normalized();
            let pair = if flipped { (b, a) } else { (a, b) };
            match by_line.get(&line) {
                Some(&k) => out[k].pairs.push(pair),
                None => {
                    let endpoints = endpoints_of(&d)?;
                    by_line.insert(line.clone(), out.len());
                    out.push(Hyperplane {
                        pairs: vec![pair],
                        line,
                        endpoints,
                        disagreeing_input: disagreeing_input(&d),
                    });
                }
            }
        }
    }
    Ok(out)
}
