//! Items, score vectors, convex weights and rank labels.
//!
//! Scores follow the "lower is better" convention of ranked positions, so a
//! rating vector where larger is better must be negated (or reversed) before
//! it is handed to this crate.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Tolerance on `λ1 + λ2 + λ3 = 1`.
pub const WEIGHT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Item {
    pub id: usize,
    pub name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScoreKind {
    Ranking,
    Rating,
}

/// One input: a value per item, lower meaning better.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    values: Vec<f64>,
    kind: ScoreKind,
}

impl ScoreVector {
    /// A ranking: every value lies in `[1, n]`. Repeated values are ties.
    pub fn ranking(values: Vec<f64>) -> Result<Self> {
        let n = values.len() as f64;
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 1.0 || **v > n) {
            return Err(Error::input(format!(
                "ranking value {v} outside [1, {n}]"
            )));
        }
        Ok(ScoreVector {
            values,
            kind: ScoreKind::Ranking,
        })
    }

    pub fn rating(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("rating values must be finite"));
        }
        Ok(ScoreVector {
            values,
            kind: ScoreKind::Rating,
        })
    }

    pub fn new(values: Vec<f64>, kind: ScoreKind) -> Result<Self> {
        match kind {
            ScoreKind::Ranking => Self::ranking(values),
            ScoreKind::Rating => Self::rating(values),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> ScoreKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// The item universe together with `j >= 3` score vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct InputSet {
    items: Vec<Item>,
    inputs: Vec<ScoreVector>,
    input_names: Vec<String>,
}

impl InputSet {
    pub fn new(
        item_names: Vec<String>,
        inputs: Vec<ScoreVector>,
        input_names: Vec<String>,
    ) -> Result<Self> {
        if item_names.is_empty() {
            return Err(Error::input("at least one item is required"));
        }
        if inputs.len() < 3 {
            return Err(Error::input(format!(
                "at least 3 inputs are required, got {}",
                inputs.len()
            )));
        }
        if input_names.len() != inputs.len() {
            return Err(Error::input(format!(
                "{} input names for {} inputs",
                input_names.len(),
                inputs.len()
            )));
        }
        let n = item_names.len();
        for (name, input) in input_names.iter().zip(&inputs) {
            if input.len() != n {
                return Err(Error::input(format!(
                    "input `{name}` has {} values, expected {n}",
                    input.len()
                )));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for name in &item_names {
            if !seen.insert(name.as_str()) {
                return Err(Error::input(format!("duplicate item name `{name}`")));
            }
        }
        let items = item_names
            .into_iter()
            .enumerate()
            .map(|(id, name)| Item { id, name })
            .collect();
        Ok(InputSet {
            items,
            inputs,
            input_names,
        })
    }

    /// Convenience constructor for integer rankings with generated names
    /// `T1..Tn` and `r1..rj`.
    pub fn from_rankings(rankings: &[Vec<u32>]) -> Result<Self> {
        let n = rankings.first().map_or(0, Vec::len);
        let inputs = rankings
            .iter()
            .map(|r| ScoreVector::ranking(r.iter().map(|&v| f64::from(v)).collect()))
            .collect::<Result<Vec<_>>>()?;
        InputSet::new(
            (1..=n).map(|i| format!("T{i}")).collect(),
            inputs,
            (1..=rankings.len()).map(|j| format!("r{j}")).collect(),
        )
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn inputs(&self) -> &[ScoreVector] {
        &self.inputs
    }

    pub fn input_names(&self) -> &[String] {
        &self.input_names
    }

    pub fn n_items(&self) -> usize {
        self.items.len()
    }

    pub fn n_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn item_index(&self, name: &str) -> Option<usize> {
        self.items.iter().position(|it| it.name == name)
    }

    /// Returns the three inputs, or an error if there are more than three.
    pub(crate) fn triple(&self) -> Result<[&ScoreVector; 3]> {
        match self.inputs.as_slice() {
            [a, b, c] => Ok([a, b, c]),
            _ => Err(Error::input(format!(
                "expected exactly 3 inputs, got {}; reduce with a partition config first",
                self.inputs.len()
            ))),
        }
    }

    /// Value of item `item` in input `input`.
    pub fn value(&self, input: usize, item: usize) -> f64 {
        self.inputs[input].values[item]
    }
}

/// A point of the weight set `{λ >= 0, λ1 + λ2 + λ3 = 1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightVector {
    lambda: [f64; 3],
}

impl WeightVector {
    pub fn new(lambda: [f64; 3]) -> Result<Self> {
        if lambda.iter().any(|l| !l.is_finite() || *l < 0.0) {
            return Err(Error::input(format!(
                "weights must be finite and nonnegative: {lambda:?}"
            )));
        }
        let sum: f64 = lambda.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::input(format!("weights sum to {sum}, not 1")));
        }
        Ok(WeightVector { lambda })
    }

    /// Projects an arbitrary nonnegative vector onto the weight set by
    /// normalizing its sum.
    pub fn normalized(raw: [f64; 3]) -> Result<Self> {
        let sum: f64 = raw.iter().sum();
        if !(sum > 0.0) || raw.iter().any(|l| *l < 0.0) {
            return Err(Error::input(format!("cannot normalize {raw:?}")));
        }
        Self::new([raw[0] / sum, raw[1] / sum, raw[2] / sum])
    }

    pub fn lambda(&self) -> [f64; 3] {
        self.lambda
    }

    pub fn corner(index: usize) -> Self {
        let mut lambda = [0.0; 3];
        lambda[index] = 1.0;
        WeightVector { lambda }
    }
}

/// The ranked position of every item, competition style (`1, 2, 2, 4`).
///
/// Equality, ordering and hashing only depend on `positions`; `tie_groups` is
/// derived from them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankLabel {
    positions: Vec<u32>,
    tie_groups: Vec<Vec<usize>>,
}

impl RankLabel {
    /// Builds a label from competition-style positions.
    pub fn from_positions(positions: Vec<u32>) -> Result<Self> {
        let n = positions.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (positions[i], i));
        for (rank, &i) in order.iter().enumerate() {
            let p = positions[i] as usize;
            let first = order.iter().position(|&k| positions[k] == positions[i]).unwrap();
            if p != first + 1 {
                return Err(Error::input(format!(
                    "positions {positions:?} are not competition ranked (item {i} at {p}, rank {})",
                    rank + 1
                )));
            }
        }
        let label = rank_by(n, |a, b| positions[a].cmp(&positions[b]));
        debug_assert_eq!(label.positions, positions);
        Ok(label)
    }

    /// Competition-style positions, `positions()[i]` being item `i`'s.
    pub fn positions(&self) -> &[u32] {
        &self.positions
    }

    /// Items grouped by equal position, groups ordered best first.
    pub fn tie_groups(&self) -> &[Vec<usize>] {
        &self.tie_groups
    }

    pub fn n_items(&self) -> usize {
        self.positions.len()
    }

    pub fn has_ties(&self) -> bool {
        self.tie_groups.len() < self.positions.len()
    }

    pub fn position(&self, item: usize) -> u32 {
        self.positions[item]
    }

    /// `Less` when `a` is ranked strictly better than `b`.
    pub fn compare(&self, a: usize, b: usize) -> Ordering {
        self.positions[a].cmp(&self.positions[b])
    }

    /// All strict orders (best first) compatible with this label.
    pub fn linearizations(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::with_capacity(self.n_items())];
        for group in &self.tie_groups {
            let perms = permutations(group);
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    perms.iter().map(move |p| {
                        let mut v = prefix.clone();
                        v.extend_from_slice(p);
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// Number of item pairs whose relative order differs between the labels.
    /// For tie-free labels this is the Kendall-tau (adjacent swap) distance.
    pub fn swap_distance(&self, other: &RankLabel) -> usize {
        let n = self.n_items();
        let mut count = 0;
        for a in 0..n {
            for b in a + 1..n {
                if self.compare(a, b) != other.compare(a, b) {
                    count += 1;
                }
            }
        }
        count
    }
}

impl fmt::Display for RankLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, p) in self.positions.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(k);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Ranks `n` items by a total preorder. `cmp(a, b) == Less` means `a` is
/// better; `Equal` puts the two items in one tie group.
pub(crate) fn rank_by<F>(n: usize, mut cmp: F) -> RankLabel
where
    F: FnMut(usize, usize) -> Ordering,
{
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cmp(a, b).then(a.cmp(&b)));

    let mut positions = vec![0u32; n];
    let mut tie_groups: Vec<Vec<usize>> = Vec::new();
    for (rank, &item) in order.iter().enumerate() {
        match tie_groups.last_mut() {
            Some(group) if cmp(group[0], item) == Ordering::Equal => {
                positions[item] = positions[group[0]];
                group.push(item);
            }
            _ => {
                positions[item] = rank as u32 + 1;
                tie_groups.push(vec![item]);
            }
        }
    }
    RankLabel {
        positions,
        tie_groups,
    }
}

/// `Σ λ_i v^i` over exactly three inputs.
pub fn aggregate(input_set: &InputSet, lambda: &WeightVector) -> Result<ScoreVector> {
    let [a, b, c] = input_set.triple()?;
    let [l1, l2, l3] = lambda.lambda();
    let values = (0..input_set.n_items())
        .map(|i| l1 * a.values[i] + l2 * b.values[i] + l3 * c.values[i])
        .collect();
    ScoreVector::rating(values)
}

/// Ranked positions of `scores`; exactly equal values tie.
pub fn rank_of(scores: &ScoreVector) -> RankLabel {
    let v = scores.values();
    rank_by(v.len(), |a, b| v[a].total_cmp(&v[b]))
}
