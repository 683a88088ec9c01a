//! Problem and decomposition files (JSON).
//!
//! Exact coordinates travel as barycentric `"p/q"` strings next to float
//! approximations, so a decomposition read back is identical to the one
//! written.

use std::fmt;

use serde::{Deserialize, Serialize};
use simplexrank::analytics::{self, grid_barchart, grid_dominance, grid_expected_ranking};
use simplexrank::decompose::{self, Utility};
use simplexrank::exact::{format_q, parse_q, qi};
use simplexrank::preprocess::normalize_inputs;
use simplexrank::{
    Adjacency, BoundaryLabel, ContactKind, Decomposition, GridColormap, IndifferenceRegion, InputSet, Method,
    NonlinearUtility, PartitionConfig, RankLabel, ScoreKind, ScoreVector, SimplexPoint,
};

use crate::palette::Palette;

pub const FORMAT_VERSION: u32 = 1;

/// A malformed file: where it went wrong and why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    /// Field path such as `inputs[1].values`, or `line 3, column 7`.
    pub location: String,
    pub message: String,
}

impl FormatError {
    fn field(location: impl Into<String>, message: impl fmt::Display) -> Self {
        FormatError {
            location: location.into(),
            message: message.to_string(),
        }
    }

    fn json(e: &serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends the position; keep only the reason.
        let message = match message.rfind(" at line ") {
            Some(k) => message[..k].to_string(),
            None => message,
        };
        FormatError {
            location: format!("line {}, column {}", e.line(), e.column()),
            message,
        }
    }
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for FormatError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputKind {
    Ranking,
    Rating,
}

impl From<InputKind> for ScoreKind {
    fn from(k: InputKind) -> Self {
        match k {
            InputKind::Ranking => ScoreKind::Ranking,
            InputKind::Rating => ScoreKind::Rating,
        }
    }
}

impl From<ScoreKind> for InputKind {
    fn from(k: ScoreKind) -> Self {
        match k {
            ScoreKind::Ranking => InputKind::Ranking,
            ScoreKind::Rating => InputKind::Rating,
        }
    }
}

/// One input: either a value per item, or a top-k `list` of item names
/// (unlisted items tie at position `k + 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    pub name: String,
    pub kind: InputKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub list: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionSpec {
    pub chosen: [usize; 3],
    pub fixed_weights: Vec<f64>,
    pub p1: f64,
    pub p2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NonlinearKind {
    Sigmoid,
}

fn default_a() -> f64 {
    5.0
}

fn default_b() -> f64 {
    10.0
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearSpec {
    #[serde(default = "yes")]
    pub enabled: bool,
    pub kind: NonlinearKind,
    #[serde(default = "default_a")]
    pub a: f64,
    #[serde(default = "default_b")]
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// Rescale every rating input to `[0, 1]` before aggregating.
    #[serde(default = "yes")]
    pub normalize: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<PartitionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonlinear: Option<NonlinearSpec>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            normalize: true,
            partition: None,
            nonlinear: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    #[serde(default)]
    pub items: Vec<String>,
    pub inputs: Vec<InputSpec>,
    #[serde(default)]
    pub options: Options,
}

/// A problem ready to decompose.
#[derive(Debug, Clone)]
pub struct Problem {
    /// All inputs after list completion and normalization.
    pub full: InputSet,
    /// The three inputs spanning the weight triangle.
    pub effective: InputSet,
    pub utility: Utility,
    pub partition: Option<PartitionConfig>,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let file: ProblemFile = serde_json::from_str(text).map_err(|e| FormatError::json(&e))?;
        if file.version != FORMAT_VERSION {
            return Err(FormatError::field(
                "version",
                format!("unsupported version {}, expected {FORMAT_VERSION}", file.version),
            ));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem serializes")
    }

    fn universe(&self) -> Result<Vec<String>, FormatError> {
        if !self.items.is_empty() {
            return Ok(self.items.clone());
        }
        let mut items: Vec<String> = Vec::new();
        for (k, input) in self.inputs.iter().enumerate() {
            let Some(list) = &input.list else {
                return Err(FormatError::field(
                    format!("inputs[{k}].values"),
                    "value inputs need a top-level `items` list",
                ));
            };
            for name in list {
                if !items.contains(name) {
                    items.push(name.clone());
                }
            }
        }
        Ok(items)
    }

    fn scores(&self, k: usize, items: &[String]) -> Result<ScoreVector, FormatError> {
        let input = &self.inputs[k];
        let at = |field: &str| format!("inputs[{k}].{field}");
        let values = match (&input.values, &input.list) {
            (Some(values), None) => values.clone(),
            (None, Some(list)) => {
                if input.kind != InputKind::Ranking {
                    return Err(FormatError::field(at("kind"), "top-k lists must have kind `ranking`"));
                }
                let top = simplexrank::TopKList::new(input.name.clone(), list.clone())
                    .map_err(|e| FormatError::field(at("list"), e))?;
                let last = top.k() as f64 + 1.0;
                if let Some(unknown) = list.iter().find(|e| !items.contains(e)) {
                    return Err(FormatError::field(at("list"), format!("unknown item `{unknown}`")));
                }
                items
                    .iter()
                    .map(|item| list.iter().position(|e| e == item).map_or(last, |p| p as f64 + 1.0))
                    .collect()
            }
            _ => return Err(FormatError::field(at("values"), "give exactly one of `values` or `list`")),
        };
        if values.len() != items.len() {
            return Err(FormatError::field(
                at("values"),
                format!("{} values for {} items", values.len(), items.len()),
            ));
        }
        ScoreVector::new(values, input.kind.into()).map_err(|e| FormatError::field(at("values"), e))
    }

    /// Completes lists, normalizes ratings and reduces to three inputs.
    pub fn build(&self) -> Result<Problem, FormatError> {
        if self.inputs.len() < 3 {
            return Err(FormatError::field(
                "inputs",
                format!("at least 3 inputs are required, got {}", self.inputs.len()),
            ));
        }
        let items = self.universe()?;
        let inputs = (0..self.inputs.len())
            .map(|k| self.scores(k, &items))
            .collect::<Result<Vec<_>, _>>()?;
        let names = self.inputs.iter().map(|i| i.name.clone()).collect();
        let mut full = InputSet::new(items, inputs, names).map_err(|e| FormatError::field("items", e))?;
        if self.options.normalize {
            full = normalize_inputs(&full).map_err(|e| FormatError::field("inputs", e))?;
        }

        let partition = match &self.options.partition {
            Some(p) => Some(PartitionConfig {
                chosen: p.chosen,
                fixed_weights: p.fixed_weights.clone(),
                p1: p.p1,
                p2: p.p2,
            }),
            None => None,
        };
        let effective = match (&partition, full.n_inputs()) {
            (Some(cfg), _) => simplexrank::reduce_to_triangle(&full, cfg)
                .map_err(|e| FormatError::field("options.partition", e))?,
            (None, 3) => full.clone(),
            (None, j) => {
                return Err(FormatError::field(
                    "options.partition",
                    format!("{j} inputs need a partition config choosing three"),
                ))
            }
        };
        let utility = match &self.options.nonlinear {
            Some(spec) if spec.enabled => Utility::Nonlinear(
                NonlinearUtility::sigmoid(spec.a, spec.b).map_err(|e| FormatError::field("options.nonlinear", e))?,
            ),
            _ => Utility::Linear,
        };
        Ok(Problem {
            full,
            effective,
            utility,
            partition,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub positions: Vec<u32>,
    pub tie_groups: Vec<Vec<usize>>,
}

impl LabelRecord {
    pub fn new(label: &RankLabel) -> Self {
        LabelRecord {
            positions: label.positions().to_vec(),
            tie_groups: label.tie_groups().to_vec(),
        }
    }

    pub fn to_label(&self, at: &str) -> Result<RankLabel, FormatError> {
        let label = RankLabel::from_positions(self.positions.clone()).map_err(|e| FormatError::field(at, e))?;
        if label.tie_groups() != self.tie_groups.as_slice() {
            return Err(FormatError::field(at, "tie groups do not match the positions"));
        }
        Ok(label)
    }
}

/// `["λ1", "λ2", "λ3"]` as exact fractions.
pub type Barycentric = [String; 3];

pub fn barycentric(p: &SimplexPoint) -> Barycentric {
    p.barycentric().map(|c| format_q(&c))
}

pub fn point_from(b: &Barycentric, at: &str) -> Result<SimplexPoint, FormatError> {
    let parse = |s: &String| parse_q(s).ok_or_else(|| FormatError::field(at, format!("`{s}` is not a fraction")));
    let [l1, l2, l3] = [parse(&b[0])?, parse(&b[1])?, parse(&b[2])?];
    if &l1 + &l2 + &l3 != qi(1) {
        return Err(FormatError::field(at, "barycentric coordinates must sum to 1"));
    }
    let p = SimplexPoint::new(l1, l2);
    if !p.in_simplex() {
        return Err(FormatError::field(at, "point lies outside the weight set"));
    }
    Ok(p)
}

fn points_from(list: &[Barycentric], at: &str) -> Result<Vec<SimplexPoint>, FormatError> {
    list.iter()
        .enumerate()
        .map(|(k, b)| point_from(b, &format!("{at}[{k}]")))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveInput {
    pub name: String,
    pub kind: InputKind,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionRecord {
    pub label: LabelRecord,
    pub vertices_equilateral: Vec<[f64; 2]>,
    pub vertices_barycentric: Vec<Barycentric>,
    /// Area in the unit-side equilateral triangle.
    pub area: f64,
    pub area_fraction: f64,
    pub centroid: [f64; 2],
    pub color_index: usize,
    pub color: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryRecord {
    pub label: LabelRecord,
    pub locus_barycentric: Vec<Barycentric>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContactRecord {
    Edge,
    Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjacencyRecord {
    pub a: usize,
    pub b: usize,
    pub kind: ContactRecord,
    pub swap_distance: usize,
    pub shared_barycentric: Vec<Barycentric>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRecord {
    pub resolution: u32,
    pub nonlinear: bool,
    pub labels: Vec<LabelRecord>,
    pub label_counts: Vec<usize>,
    /// Color per entry of `labels`.
    pub colors: Vec<String>,
    /// Label index per lattice cell, ordered by `i` then `j`.
    pub cells: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarRecord {
    pub label: LabelRecord,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticsRecord {
    pub barchart: Vec<BarRecord>,
    pub xstar: Vec<Vec<f64>>,
    pub astar: Vec<Vec<f64>>,
    pub expected_ranking: Vec<f64>,
    pub rankability: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodRecord {
    Exact,
    Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionFile {
    pub version: u32,
    pub problem: ProblemFile,
    pub items: Vec<String>,
    pub effective_inputs: Vec<EffectiveInput>,
    pub method: MethodRecord,
    /// False when the regions leave part of the weight set uncovered.
    pub complete: bool,
    pub covered_fraction: f64,
    pub hyperplane_count: usize,
    pub grid_resolution: Option<u32>,
    pub regions: Vec<RegionRecord>,
    pub boundary_labels: Vec<BoundaryRecord>,
    pub adjacency: Vec<AdjacencyRecord>,
    pub grid: Option<GridRecord>,
    pub analytics: AnalyticsRecord,
}

fn effective_inputs(set: &InputSet) -> Vec<EffectiveInput> {
    set.inputs()
        .iter()
        .zip(set.input_names())
        .map(|(v, name)| EffectiveInput {
            name: name.clone(),
            kind: v.kind().into(),
            values: v.values().to_vec(),
        })
        .collect()
}

fn bars(list: Vec<(RankLabel, f64)>) -> Vec<BarRecord> {
    list.into_iter()
        .map(|(l, fraction)| BarRecord {
            label: LabelRecord::new(&l),
            fraction,
        })
        .collect()
}

impl DecompositionFile {
    /// Records an exact decomposition.
    pub fn from_exact(problem: &ProblemFile, d: &Decomposition, complete: bool, palette: &Palette) -> Self {
        let graph = analytics::adjacency_graph(d);
        let regions = d
            .regions
            .iter()
            .map(|r| RegionRecord {
                label: LabelRecord::new(&r.label),
                vertices_equilateral: r.vertices_equilateral.clone(),
                vertices_barycentric: r.vertices.iter().map(barycentric).collect(),
                area: r.area,
                area_fraction: r.area_fraction,
                centroid: r.centroid,
                color_index: r.color,
                color: palette.color(r.color).to_string(),
            })
            .collect();
        let boundary_labels = d
            .boundary_labels
            .iter()
            .map(|b| BoundaryRecord {
                label: LabelRecord::new(&b.label),
                locus_barycentric: b.locus.iter().map(barycentric).collect(),
            })
            .collect();
        let adjacency = d
            .adjacency
            .iter()
            .zip(graph)
            .map(|(adj, edge)| AdjacencyRecord {
                a: adj.regions.0,
                b: adj.regions.1,
                kind: match adj.kind {
                    ContactKind::Edge => ContactRecord::Edge,
                    ContactKind::Point => ContactRecord::Point,
                },
                swap_distance: edge.swap_distance,
                shared_barycentric: adj.shared.iter().map(barycentric).collect(),
            })
            .collect();
        let m = analytics::dominance_matrices(d);
        DecompositionFile {
            version: FORMAT_VERSION,
            problem: problem.clone(),
            items: d.input_set.items().iter().map(|i| i.name.clone()).collect(),
            effective_inputs: effective_inputs(&d.input_set),
            method: MethodRecord::Exact,
            complete,
            covered_fraction: d.covered_fraction(),
            hyperplane_count: d.hyperplane_count,
            grid_resolution: d.grid_resolution,
            regions,
            boundary_labels,
            adjacency,
            grid: None,
            analytics: AnalyticsRecord {
                barchart: bars(analytics::barchart(d)),
                xstar: m.xstar,
                astar: m.astar,
                expected_ranking: analytics::expected_ranking(d),
                rankability: analytics::rankability(d),
            },
        }
    }

    /// Records a grid colormap.
    pub fn from_grid(problem: &ProblemFile, set: &InputSet, g: &GridColormap, palette: &Palette) -> Self {
        let m = grid_dominance(g);
        let hyperplane_count = simplexrank::geometry::hyperplanes(set).map_or(0, |h| h.len());
        DecompositionFile {
            version: FORMAT_VERSION,
            problem: problem.clone(),
            items: set.items().iter().map(|i| i.name.clone()).collect(),
            effective_inputs: effective_inputs(set),
            method: MethodRecord::Grid,
            complete: true,
            covered_fraction: 1.0,
            hyperplane_count,
            grid_resolution: Some(g.resolution),
            regions: Vec::new(),
            boundary_labels: Vec::new(),
            adjacency: Vec::new(),
            grid: Some(GridRecord {
                resolution: g.resolution,
                nonlinear: g.nonlinear,
                labels: g.labels.iter().map(LabelRecord::new).collect(),
                label_counts: g.label_counts.clone(),
                colors: g.labels.iter().map(|l| palette.color(decompose::color_id(l)).to_string()).collect(),
                cells: g.cells.iter().map(|c| c.label).collect(),
            }),
            analytics: AnalyticsRecord {
                barchart: bars(grid_barchart(g)),
                xstar: m.xstar,
                astar: m.astar,
                expected_ranking: grid_expected_ranking(g),
                rankability: g.labels.iter().filter(|l| !l.has_ties()).count(),
            },
        }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let file: DecompositionFile = serde_json::from_str(text).map_err(|e| FormatError::json(&e))?;
        if file.version != FORMAT_VERSION {
            return Err(FormatError::field("version", format!("unsupported version {}", file.version)));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("decomposition serializes")
    }

    /// The three aggregated inputs.
    pub fn input_set(&self) -> Result<InputSet, FormatError> {
        let inputs = self
            .effective_inputs
            .iter()
            .enumerate()
            .map(|(k, e)| {
                ScoreVector::new(e.values.clone(), e.kind.into())
                    .map_err(|err| FormatError::field(format!("effective_inputs[{k}]"), err))
            })
            .collect::<Result<Vec<_>, _>>()?;
        InputSet::new(
            self.items.clone(),
            inputs,
            self.effective_inputs.iter().map(|e| e.name.clone()).collect(),
        )
        .map_err(|e| FormatError::field("effective_inputs", e))
    }

    pub fn utility(&self) -> Result<Utility, FormatError> {
        match &self.problem.options.nonlinear {
            Some(spec) if spec.enabled => Ok(Utility::Nonlinear(
                NonlinearUtility::sigmoid(spec.a, spec.b)
                    .map_err(|e| FormatError::field("problem.options.nonlinear", e))?,
            )),
            _ => Ok(Utility::Linear),
        }
    }

    /// Rebuilds the exact decomposition from the rational coordinates.
    pub fn to_decomposition(&self) -> Result<Decomposition, FormatError> {
        if self.method != MethodRecord::Exact {
            return Err(FormatError::field("method", "only exact decompositions carry regions"));
        }
        let input_set = self.input_set()?;
        let regions = self
            .regions
            .iter()
            .enumerate()
            .map(|(k, r)| {
                let at = format!("regions[{k}]");
                let label = r.label.to_label(&format!("{at}.label"))?;
                let vertices = points_from(&r.vertices_barycentric, &format!("{at}.vertices_barycentric"))?;
                Ok(IndifferenceRegion::new(label, vertices))
            })
            .collect::<Result<Vec<_>, FormatError>>()?;
        let boundary_labels = self
            .boundary_labels
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let at = format!("boundary_labels[{k}]");
                Ok(BoundaryLabel {
                    label: b.label.to_label(&format!("{at}.label"))?,
                    locus: points_from(&b.locus_barycentric, &format!("{at}.locus_barycentric"))?,
                })
            })
            .collect::<Result<Vec<_>, FormatError>>()?;
        let adjacency = self
            .adjacency
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let at = format!("adjacency[{k}]");
                if a.a >= regions.len() || a.b >= regions.len() || a.a >= a.b {
                    return Err(FormatError::field(&at, "region indices out of order or range"));
                }
                Ok(Adjacency {
                    regions: (a.a, a.b),
                    kind: match a.kind {
                        ContactRecord::Edge => ContactKind::Edge,
                        ContactRecord::Point => ContactKind::Point,
                    },
                    shared: points_from(&a.shared_barycentric, &format!("{at}.shared_barycentric"))?,
                })
            })
            .collect::<Result<Vec<_>, FormatError>>()?;
        Ok(Decomposition {
            input_set,
            regions,
            boundary_labels,
            method: Method::Exact,
            grid_resolution: self.grid_resolution,
            adjacency,
            hyperplane_count: self.hyperplane_count,
        })
    }

    /// Grid labels, for grid-method files.
    pub fn grid_labels(&self) -> Result<Vec<RankLabel>, FormatError> {
        let grid = self
            .grid
            .as_ref()
            .ok_or_else(|| FormatError::field("grid", "missing grid record"))?;
        grid.labels
            .iter()
            .enumerate()
            .map(|(k, l)| l.to_label(&format!("grid.labels[{k}]")))
            .collect()
    }

    /// Candidate labels for point queries: regions, or grid labels.
    pub fn labels(&self) -> Result<Vec<RankLabel>, FormatError> {
        match self.method {
            MethodRecord::Exact => self
                .regions
                .iter()
                .enumerate()
                .map(|(k, r)| r.label.to_label(&format!("regions[{k}].label")))
                .collect(),
            MethodRecord::Grid => self.grid_labels(),
        }
    }
}

/// Grid cell count check used when reading grid files.
pub fn grid_cells_consistent(grid: &GridRecord) -> bool {
    grid.cells.len() == decompose::GridColormap::cell_count(grid.resolution)
        && grid.cells.iter().all(|&c| c < grid.labels.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    const ANNE: &str = r#"{
        "version": 1,
        "items": ["T1", "T2", "T3", "T4", "T5"],
        "inputs": [
            {"name": "complexity", "kind": "ranking", "values": [1, 2, 3, 4, 5]},
            {"name": "effectiveness", "kind": "ranking", "values": [1, 3, 2, 4, 5]},
            {"name": "quality of life", "kind": "ranking", "values": [5, 1, 2, 3, 4]}
        ]
    }"#;

    #[test]
    fn problem_defaults() {
        let p = ProblemFile::parse(ANNE).unwrap();
        assert!(p.options.normalize);
        let built = p.build().unwrap();
        assert_eq!(built.effective.n_items(), 5);
        assert!(built.utility.is_linear());
        assert_eq!(ProblemFile::parse(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn diagnostics_name_the_place() {
        let e = ProblemFile::parse("{\n  \"version\": 1,\n  \"inputs\": 3\n}").unwrap_err();
        assert_eq!(e.location, "line 3, column 13");
        let e = ProblemFile::parse(&ANNE.replace("[1, 3, 2, 4, 5]", "[1, 3, 2]"))
            .unwrap()
            .build()
            .unwrap_err();
        assert_eq!(e.location, "inputs[1].values");
        let e = ProblemFile::parse(&ANNE.replace("\"version\": 1", "\"version\": 2")).unwrap_err();
        assert_eq!(e.location, "version");
        let e = ProblemFile::parse(&ANNE.replace("\"ranking\", \"values\": [5", "\"grade\", \"values\": [5"))
            .unwrap_err();
        assert!(e.message.contains("unknown variant"), "{e}");
    }

    #[test]
    fn top_k_lists_complete_over_the_union() {
        let text = r#"{"version": 1, "inputs": [
            {"name": "safety", "kind": "ranking", "list": ["T1", "T2", "T10", "T4", "T8"]},
            {"name": "cost", "kind": "ranking", "list": ["T3", "T5", "T6"]},
            {"name": "comfort", "kind": "ranking", "list": ["T2", "T1"]}
        ]}"#;
        let built = ProblemFile::parse(text).unwrap().build().unwrap();
        let set = &built.effective;
        assert_eq!(set.n_items(), 8);
        let safety: Vec<f64> = ["T1", "T2", "T10", "T4", "T8", "T3", "T5", "T6"]
            .iter()
            .map(|i| set.value(0, set.item_index(i).unwrap()))
            .collect();
        assert_eq!(safety, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 6.0, 6.0]);
    }

    #[test]
    fn ratings_are_normalized_unless_disabled() {
        let text = r#"{"version": 1, "items": ["a", "b", "c"], "inputs": [
            {"name": "x", "kind": "rating", "values": [10, 105, 200]},
            {"name": "y", "kind": "ranking", "values": [3, 2, 1]},
            {"name": "z", "kind": "rating", "values": [-10, 0, 10]}
        ], "options": {"normalize": NORM}}"#;
        let on = ProblemFile::parse(&text.replace("NORM", "true")).unwrap().build().unwrap();
        assert_eq!(on.effective.inputs()[0].values(), &[0.0, 0.5, 1.0]);
        assert_eq!(on.effective.inputs()[1].values(), &[3.0, 2.0, 1.0]);
        let off = ProblemFile::parse(&text.replace("NORM", "false")).unwrap().build().unwrap();
        assert_eq!(off.effective.inputs()[0].values(), &[10.0, 105.0, 200.0]);
    }

    #[test]
    fn many_inputs_need_a_partition() {
        let text = r#"{"version": 1, "items": ["a", "b"], "inputs": [
            {"name": "1", "kind": "ranking", "values": [1, 2]},
            {"name": "2", "kind": "ranking", "values": [2, 1]},
            {"name": "3", "kind": "ranking", "values": [1, 2]},
            {"name": "4", "kind": "ranking", "values": [2, 1]}
        ]PART}"#;
        let e = ProblemFile::parse(&text.replace("PART", "")).unwrap().build().unwrap_err();
        assert_eq!(e.location, "options.partition");
        let with = text.replace(
            "PART",
            r#", "options": {"partition": {"chosen": [0, 1, 3], "fixed_weights": [1], "p1": 0.5, "p2": 0.5}}"#,
        );
        let built = ProblemFile::parse(&with).unwrap().build().unwrap();
        assert_eq!(built.effective.input_names(), &["1", "2", "4"]);
        assert_eq!(built.effective.inputs()[1].values(), &[1.5, 1.5]);
    }

    #[test]
    fn barycentric_strings_round_trip() {
        let p = SimplexPoint::from_ints((2, 3), (1, 9));
        let b = barycentric(&p);
        assert_eq!(b, ["2/3".to_string(), "1/9".to_string(), "2/9".to_string()]);
        assert_eq!(point_from(&b, "x").unwrap(), p);
        let bad = ["1/2".to_string(), "1/2".to_string(), "1/2".to_string()];
        assert!(point_from(&bad, "x").is_err());
    }
}
