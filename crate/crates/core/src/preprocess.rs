//! Cleaning raw inputs: rating normalization, rating to ranking conversion
//! and completion of top-k lists.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::model::{rank_of, InputSet, ScoreKind, ScoreVector};

/// Maps a rating onto `[0, 1]` by `(v − min) / (max − min)`.
pub fn normalize_rating(v: &ScoreVector) -> Result<ScoreVector> {
    let values = v.values();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if values.is_empty() || min == max {
        return Err(Error::Degenerate(
            "rating has no spread to normalize".into(),
        ));
    }
    let span = max - min;
    ScoreVector::rating(values.iter().map(|x| (x - min) / span).collect())
}

/// Competition-style positions of a rating as a ranking.
pub fn ranking_from_rating(v: &ScoreVector) -> ScoreVector {
    let positions = rank_of(v).positions().iter().map(|&p| f64::from(p)).collect();
    ScoreVector::ranking(positions).expect("positions lie in [1, n]")
}

/// Normalizes every rating input, leaving rankings untouched.
pub fn normalize_inputs(set: &InputSet) -> Result<InputSet> {
    let inputs = set
        .inputs()
        .iter()
        .zip(set.input_names())
        .map(|(v, name)| match v.kind() {
            ScoreKind::Ranking => Ok(v.clone()),
            ScoreKind::Rating => normalize_rating(v)
                .map_err(|e| Error::Degenerate(format!("input `{name}`: {e}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    InputSet::new(
        set.items().iter().map(|i| i.name.clone()).collect(),
        inputs,
        set.input_names().to_vec(),
    )
}

/// An ordered list of the best `k` items of one input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopKList {
    pub name: String,
    pub entries: Vec<String>,
}

impl TopKList {
    pub fn new(name: impl Into<String>, entries: Vec<String>) -> Result<Self> {
        let name = name.into();
        if entries.is_empty() {
            return Err(Error::input(format!("list `{name}` is empty")));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = entries.iter().find(|e| !seen.insert(e.as_str())) {
            return Err(Error::input(format!("list `{name}` names `{dup}` twice")));
        }
        Ok(TopKList { name, entries })
    }

    pub fn k(&self) -> usize {
        self.entries.len()
    }
}

/// Completes top-k lists into full rankings over the union of their items.
///
/// Items appear in order of first mention. Unlisted items share position
/// `k + 1` in that input.
pub fn complete_lists(lists: &[TopKList]) -> Result<InputSet> {
    let mut universe: Vec<String> = Vec::new();
    let mut known = HashSet::new();
    for list in lists {
        let list = TopKList::new(list.name.clone(), list.entries.clone())?;
        for e in list.entries {
            if known.insert(e.clone()) {
                universe.push(e);
            }
        }
    }
    let inputs = lists
        .iter()
        .map(|list| {
            let last = list.k() as f64 + 1.0;
            let values = universe
                .iter()
                .map(|item| {
                    list.entries
                        .iter()
                        .position(|e| e == item)
                        .map_or(last, |p| p as f64 + 1.0)
                })
                .collect();
            ScoreVector::ranking(values)
        })
        .collect::<Result<Vec<_>>>()?;
    InputSet::new(
        universe,
        inputs,
        lists.iter().map(|l| l.name.clone()).collect(),
    )
}
