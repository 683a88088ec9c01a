//! Grid and exact decomposition of the weight set into indifference regions.
//!
//! The exact algorithm:
//!
//! 1. grid search to collect candidate rank labels,
//! 2. separating hyperplanes for every disagreeing item pair,
//! 3. all pairwise intersections plus hyperplane endpoints and corners,
//! 4. each intersection point gets every candidate label consistent with the
//!    aggregate there,
//! 5. a label's region is the convex hull of its points,
//! 6. coordinates are mapped to the equilateral triangle.
//!
//! If the regions do not cover the simplex a label was missed in step 1.
//! The gap is repaired by probing both sides of every arrangement edge and
//! by repeating step 1 on a finer grid.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{self, consistent, rank_at_weights, rank_exact, rank_perturbed, ratio, ExactScores, Q, SimplexPoint};
use crate::extensions::NonlinearUtility;
use crate::geometry::{self, projected_to_equilateral, Hyperplane, Line};
use crate::model::{InputSet, RankLabel, WeightVector};
use crate::polygon::{self, Contact};

/// Number of distinct region colors.
pub const PALETTE_SIZE: usize = 24;

/// Area of the weight set in projected coordinates.
pub fn simplex_area() -> Q {
    ratio(1, 2)
}

/// Area of the unit-side equilateral triangle.
pub fn equilateral_simplex_area() -> f64 {
    3f64.sqrt() / 4.0
}

/// Deterministic color id of a label: FNV-1a of its display string.
pub fn color_id(label: &RankLabel) -> usize {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in label.to_string().bytes() {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    (hash % PALETTE_SIZE as u64) as usize
}

#[derive(Debug, Clone)]
pub enum Utility {
    /// `Σ λ_i v^i`.
    Linear,
    /// `λ1 v^1 + λ2 v^2 + f(λ3) v^3`.
    Nonlinear(NonlinearUtility),
}

impl Utility {
    /// Coefficients applied to the three inputs at weight `lambda`.
    pub fn coefficients(&self, lambda: [f64; 3]) -> [f64; 3] {
        match self {
            Utility::Linear => lambda,
            Utility::Nonlinear(f) => [lambda[0], lambda[1], f.eval(lambda[2])],
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, Utility::Linear)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub i: u32,
    pub j: u32,
    pub weight: WeightVector,
    /// Index into [`GridColormap::labels`].
    pub label: usize,
}

/// Labels on the lattice `{(i/K, j/K, (K−i−j)/K)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridColormap {
    pub resolution: u32,
    /// Ordered by `i`, then `j`.
    pub cells: Vec<GridCell>,
    /// Distinct labels, sorted.
    pub labels: Vec<RankLabel>,
    /// Cell count per entry of `labels`.
    pub label_counts: Vec<usize>,
    pub nonlinear: bool,
}

impl GridColormap {
    pub fn cell_count(resolution: u32) -> usize {
        let k = resolution as usize;
        (k + 1) * (k + 2) / 2
    }

    pub fn cell_index(&self, i: u32, j: u32) -> usize {
        let (k, i, j) = (self.resolution as usize, i as usize, j as usize);
        i * (k + 1) - i * i.saturating_sub(1) / 2 + j
    }

    pub fn label_of(&self, cell: &GridCell) -> &RankLabel {
        &self.labels[cell.label]
    }

    /// `(label, share of cells)` per distinct label.
    pub fn fractions(&self) -> Vec<(&RankLabel, f64)> {
        let total = self.cells.len() as f64;
        self.labels
            .iter()
            .zip(&self.label_counts)
            .map(|(l, &c)| (l, c as f64 / total))
            .collect()
    }
}

/// Heuristic colormap: the rank label at every lattice weight.
pub fn grid_decompose(input_set: &InputSet, resolution: u32, utility: &Utility) -> Result<GridColormap> {
    if resolution == 0 {
        return Err(Error::input("grid resolution must be at least 1"));
    }
    input_set.triple()?;
    let k = resolution;
    let kf = f64::from(k);
    let rows: Vec<Vec<(u32, u32, RankLabel)>> = (0..=k)
        .into_par_iter()
        .map(|i| {
            (0..=k - i)
                .map(|j| {
                    let rest = k - i - j;
                    let coeffs = match utility {
                        // Integer coefficients keep lattice ties exact.
                        Utility::Linear => [f64::from(i), f64::from(j), f64::from(rest)],
                        u => u.coefficients([f64::from(i) / kf, f64::from(j) / kf, f64::from(rest) / kf]),
                    };
                    (i, j, rank_at_weights(input_set, coeffs))
                })
                .collect()
        })
        .collect();

    let mut index: BTreeMap<RankLabel, usize> = BTreeMap::new();
    for (_, _, label) in rows.iter().flatten() {
        if !index.contains_key(label) {
            index.insert(label.clone(), 0);
        }
    }
    for (k, slot) in index.values_mut().enumerate() {
        *slot = k;
    }
    let mut counts = vec![0usize; index.len()];
    let cells = rows
        .into_iter()
        .flatten()
        .map(|(i, j, label)| {
            let id = index[&label];
            counts[id] += 1;
            let rest = k - i - j;
            GridCell {
                i,
                j,
                weight: WeightVector::normalized([f64::from(i), f64::from(j), f64::from(rest)])
                    .expect("lattice weight"),
                label: id,
            }
        })
        .collect();
    Ok(GridColormap {
        resolution,
        cells,
        labels: index.into_keys().collect(),
        label_counts: counts,
        nonlinear: !utility.is_linear(),
    })
}

/// Distinct labels of the linear grid colormap.
pub fn collect_labels(input_set: &InputSet, resolution: u32) -> Result<BTreeSet<RankLabel>> {
    Ok(grid_decompose(input_set, resolution, &Utility::Linear)?
        .labels
        .into_iter()
        .collect())
}

/// All pairwise line intersections inside the simplex, every hyperplane
/// endpoint and the three corners, deduplicated and sorted.
pub fn intersection_points(hyperplanes: &[Hyperplane]) -> Vec<SimplexPoint> {
    let mut points: BTreeSet<SimplexPoint> = SimplexPoint::corners().into_iter().collect();
    for (k, h) in hyperplanes.iter().enumerate() {
        points.extend(h.endpoints.iter().cloned());
        for other in &hyperplanes[k + 1..] {
            if let Some(p) = h.line.intersect(&other.line) {
                if p.in_simplex() {
                    points.insert(p);
                }
            }
        }
    }
    points.into_iter().collect()
}

/// Labels from `candidates` consistent with the aggregate at `point`.
pub fn label_point(input_set: &InputSet, candidates: &[RankLabel], point: &SimplexPoint) -> Result<Vec<RankLabel>> {
    if !point.in_simplex() {
        return Err(Error::input(format!("{point} lies outside the weight set")));
    }
    let scores = ExactScores::new(input_set)?.at(point);
    Ok(candidates
        .iter()
        .filter(|l| l.n_items() == scores.len() && consistent(l, &scores))
        .cloned()
        .collect())
}

/// The line arrangement of a three-input set with exact scores at every
/// vertex.
#[derive(Debug, Clone)]
pub struct Arrangement {
    pub hyperplanes: Vec<Hyperplane>,
    pub points: Vec<SimplexPoint>,
    scores: Vec<Vec<Q>>,
    exact: ExactScores,
}

impl Arrangement {
    pub fn new(input_set: &InputSet) -> Result<Self> {
        let exact = ExactScores::new(input_set)?;
        let hyperplanes = geometry::hyperplanes(input_set)?;
        let points = intersection_points(&hyperplanes);
        let scores = points.iter().map(|p| exact.at(p)).collect();
        Ok(Arrangement {
            hyperplanes,
            points,
            scores,
            exact,
        })
    }

    /// Arrangement vertices on `line`, in order along it.
    fn points_on(&self, line: &Line) -> Vec<&SimplexPoint> {
        self.points.iter().filter(|p| line.contains(p)).collect()
    }

    /// Midpoints of the arrangement edges on `line`.
    fn edge_midpoints(&self, line: &Line) -> Vec<SimplexPoint> {
        self.points_on(line)
            .windows(2)
            .map(|w| w[0].midpoint(w[1]))
            .collect()
    }

    fn consistent_hull(&self, label: &RankLabel) -> Vec<SimplexPoint> {
        let pts: Vec<SimplexPoint> = self
            .points
            .iter()
            .zip(&self.scores)
            .filter(|(_, s)| consistent(label, s))
            .map(|(p, _)| p.clone())
            .collect();
        polygon::convex_hull(&pts)
    }

    /// Labels on both sides of every hyperplane edge. Every full-dimensional
    /// region has at least one such edge unless there are no hyperplanes.
    fn probe_labels(&self) -> BTreeSet<RankLabel> {
        let mut out = BTreeSet::new();
        for h in &self.hyperplanes {
            for m in self.edge_midpoints(&h.line) {
                let at = self.exact.at(&m);
                for sign in [1i64, -1] {
                    let s = exact::qi(sign);
                    let toward = SimplexPoint::new(&m.x + &h.line.a * &s, &m.y + &h.line.b * &s);
                    out.insert(rank_perturbed(&at, &self.exact.at(&toward)));
                }
            }
        }
        out
    }

    /// Exact labels at vertices and edge midpoints that do not belong to a
    /// full-dimensional region, with the segment or point they occupy.
    fn boundary_labels(&self, region_labels: &BTreeSet<&RankLabel>) -> Vec<BoundaryLabel> {
        let mut candidates: BTreeSet<RankLabel> = self.scores.iter().map(|s| rank_exact(s)).collect();
        let lines = self
            .hyperplanes
            .iter()
            .map(|h| h.line.clone())
            .chain(Line::simplex_edges());
        for line in lines {
            for m in self.edge_midpoints(&line) {
                candidates.insert(rank_exact(&self.exact.at(&m)));
            }
        }
        candidates
            .into_iter()
            .filter(|l| !region_labels.contains(l))
            .filter_map(|label| {
                let locus = self.consistent_hull(&label);
                (!locus.is_empty() && locus.len() <= 2).then_some(BoundaryLabel { label, locus })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndifferenceRegion {
    pub label: RankLabel,
    /// Counterclockwise strict hull in projected coordinates.
    pub vertices: Vec<SimplexPoint>,
    pub vertices_equilateral: Vec<[f64; 2]>,
    /// Exact area in projected coordinates.
    pub exact_area: Q,
    /// Area in the equilateral triangle.
    pub area: f64,
    pub area_fraction: f64,
    pub exact_centroid: SimplexPoint,
    /// Centroid in equilateral coordinates.
    pub centroid: [f64; 2],
    pub color: usize,
}

impl IndifferenceRegion {
    /// Builds a region from its hull and derives every measure from it.
    pub fn new(label: RankLabel, vertices: Vec<SimplexPoint>) -> Self {
        let exact_area = polygon::area(&vertices);
        let exact_centroid = polygon::centroid(&vertices);
        let fraction = exact::to_f64(&(&exact_area / simplex_area()));
        let color = color_id(&label);
        IndifferenceRegion {
            vertices_equilateral: vertices.iter().map(|v| projected_to_equilateral(v.to_f64())).collect(),
            area: exact::to_f64(&exact_area) * geometry::equilateral_area_factor(),
            area_fraction: fraction,
            centroid: projected_to_equilateral(exact_centroid.to_f64()),
            exact_centroid,
            exact_area,
            label,
            vertices,
            color,
        }
    }

    /// Point inside or on the region, in float projected coordinates.
    pub fn contains_f64(&self, p: [f64; 2], tolerance: f64) -> bool {
        let v: Vec<[f64; 2]> = self.vertices.iter().map(SimplexPoint::to_f64).collect();
        let n = v.len();
        (0..n).all(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
            let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
            cross >= -tolerance * len
        })
    }
}

/// A label realized only on a segment or at a point (a tie locus).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLabel {
    pub label: RankLabel,
    /// One point, or the two ends of a segment.
    pub locus: Vec<SimplexPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContactKind {
    Edge,
    Point,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Adjacency {
    /// Region indices, first < second.
    pub regions: (usize, usize),
    pub kind: ContactKind,
    /// Shared segment ends, or the single shared point.
    pub shared: Vec<SimplexPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Exact,
    Grid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub input_set: InputSet,
    pub regions: Vec<IndifferenceRegion>,
    pub boundary_labels: Vec<BoundaryLabel>,
    pub method: Method,
    /// Grid resolution of the last seeding pass.
    pub grid_resolution: Option<u32>,
    pub adjacency: Vec<Adjacency>,
    /// Number of distinct separating lines.
    pub hyperplane_count: usize,
}

impl Decomposition {
    pub fn total_exact_area(&self) -> Q {
        self.regions.iter().fold(Q::zero(), |acc, r| acc + &r.exact_area)
    }

    pub fn covered_fraction(&self) -> f64 {
        exact::to_f64(&(self.total_exact_area() / simplex_area()))
    }

    pub fn labels(&self) -> Vec<RankLabel> {
        self.regions.iter().map(|r| r.label.clone()).collect()
    }

    pub fn region_index(&self, label: &RankLabel) -> Option<usize> {
        self.regions.iter().position(|r| &r.label == label)
    }

    /// Regions whose closure contains `point`.
    pub fn regions_at(&self, point: &SimplexPoint) -> Vec<usize> {
        self.regions
            .iter()
            .enumerate()
            .filter(|(_, r)| polygon::contains(&r.vertices, point))
            .map(|(k, _)| k)
            .collect()
    }

    /// Full-dimensional region labels consistent with the aggregate at `point`.
    pub fn labels_at(&self, point: &SimplexPoint) -> Result<Vec<RankLabel>> {
        label_point(&self.input_set, &self.labels(), point)
    }

    /// Checks the structural invariants: distinct labels, strictly convex
    /// counterclockwise regions, exact tiling and interior disjointness.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut seen = BTreeSet::new();
        for (k, r) in self.regions.iter().enumerate() {
            if !seen.insert(&r.label) {
                return Err(format!("label {} appears twice", r.label));
            }
            if !polygon::is_strictly_convex(&r.vertices) {
                return Err(format!("region {k} ({}) is not strictly convex", r.label));
            }
            if polygon::convex_hull(&r.vertices) != r.vertices {
                return Err(format!("region {k} differs from its own hull"));
            }
            if r.exact_area <= Q::zero() {
                return Err(format!("region {k} has no area"));
            }
        }
        if self.total_exact_area() != simplex_area() {
            return Err(format!(
                "regions cover {} of the weight set",
                self.covered_fraction()
            ));
        }
        for i in 0..self.regions.len() {
            for j in i + 1..self.regions.len() {
                let overlap = polygon::intersect_convex(&self.regions[i].vertices, &self.regions[j].vertices);
                if !polygon::area(&overlap).is_zero() {
                    return Err(format!("regions {i} and {j} overlap"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecomposeConfig {
    /// Resolution of the first labeling grid.
    pub seed_resolution: u32,
    /// Grid doublings allowed after a coverage gap.
    pub max_refinements: u32,
    /// On a gap, also probe both sides of every arrangement edge.
    pub probe_edges: bool,
}

impl Default for DecomposeConfig {
    fn default() -> Self {
        DecomposeConfig {
            seed_resolution: 100,
            max_refinements: 3,
            probe_edges: true,
        }
    }
}

fn regions_from(arr: &Arrangement, seeds: &BTreeSet<RankLabel>) -> Vec<IndifferenceRegion> {
    seeds
        .par_iter()
        .filter_map(|label| {
            let hull = arr.consistent_hull(label);
            (hull.len() >= 3).then(|| IndifferenceRegion::new(label.clone(), hull))
        })
        .collect()
}

fn adjacency_of(regions: &[IndifferenceRegion]) -> Vec<Adjacency> {
    let pairs: Vec<(usize, usize)> = (0..regions.len())
        .flat_map(|i| (i + 1..regions.len()).map(move |j| (i, j)))
        .collect();
    pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let (kind, shared) = match polygon::contact(&regions[i].vertices, &regions[j].vertices)? {
                Contact::Edge(a, b) => (ContactKind::Edge, vec![a, b]),
                Contact::Point(p) => (ContactKind::Point, vec![p]),
            };
            Some(Adjacency {
                regions: (i, j),
                kind,
                shared,
            })
        })
        .collect()
}

fn assemble(
    input_set: &InputSet,
    arr: &Arrangement,
    regions: Vec<IndifferenceRegion>,
    resolution: u32,
) -> Decomposition {
    let labels: BTreeSet<&RankLabel> = regions.iter().map(|r| &r.label).collect();
    let boundary_labels = arr.boundary_labels(&labels);
    let adjacency = adjacency_of(&regions);
    Decomposition {
        input_set: input_set.clone(),
        regions,
        boundary_labels,
        method: Method::Exact,
        grid_resolution: Some(resolution),
        adjacency,
        hyperplane_count: arr.hyperplanes.len(),
    }
}

/// Exact decomposition of a three-input set under the linear aggregate.
pub fn exact_decompose(input_set: &InputSet, config: &DecomposeConfig) -> Result<Decomposition> {
    if config.seed_resolution == 0 {
        return Err(Error::input("seed resolution must be at least 1"));
    }
    let arr = Arrangement::new(input_set)?;
    let full = simplex_area();
    let covered = |regions: &[IndifferenceRegion]| {
        regions.iter().fold(Q::zero(), |acc, r| acc + &r.exact_area) == full
    };

    let mut seeds = BTreeSet::new();
    let mut resolution = config.seed_resolution;
    let mut probed = false;
    let mut regions;
    let mut attempt = 0;
    loop {
        seeds.extend(collect_labels(input_set, resolution)?);
        regions = regions_from(&arr, &seeds);
        if covered(&regions) {
            break;
        }
        if config.probe_edges && !probed {
            probed = true;
            seeds.extend(arr.probe_labels());
            regions = regions_from(&arr, &seeds);
            if covered(&regions) {
                break;
            }
        }
        if attempt == config.max_refinements {
            let partial = assemble(input_set, &arr, regions, resolution);
            return Err(Error::Incomplete {
                covered_fraction: partial.covered_fraction(),
                partial: Box::new(partial),
            });
        }
        attempt += 1;
        resolution = resolution.saturating_mul(2);
    }
    Ok(assemble(input_set, &arr, regions, resolution))
}

/// Index of every region label, for lookups from grid labels.
pub fn label_index(decomposition: &Decomposition) -> HashMap<RankLabel, usize> {
    decomposition
        .regions
        .iter()
        .enumerate()
        .map(|(k, r)| (r.label.clone(), k))
        .collect()
}
