//! Quantities read off a decomposition.

use std::cmp::Ordering;

use num_traits::Zero;

use crate::decompose::{simplex_area, ContactKind, Decomposition, GridColormap};
use crate::error::{Error, Result};
use crate::exact::{self, SimplexPoint, Q};
use crate::geometry::{classify_pair, line_of, to_equilateral, PairClass};
use crate::model::{InputSet, RankLabel, WeightVector};
use crate::polygon;

/// `(label, area fraction)` for every region, largest first.
pub fn barchart(d: &Decomposition) -> Vec<(RankLabel, f64)> {
    let mut bars: Vec<(RankLabel, Q)> = d
        .regions
        .iter()
        .map(|r| (r.label.clone(), &r.exact_area / simplex_area()))
        .collect();
    bars.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    bars.into_iter().map(|(l, f)| (l, exact::to_f64(&f))).collect()
}

/// Share of grid cells per label, largest first.
pub fn grid_barchart(g: &GridColormap) -> Vec<(RankLabel, f64)> {
    let mut bars: Vec<(RankLabel, f64)> = g.fractions().into_iter().map(|(l, f)| (l.clone(), f)).collect();
    bars.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    bars
}

/// `xstar[i][j]`: share of region labels ranking `i` above `j`.
/// `astar[i][j]`: share of the weight set's area doing so.
/// A label tying `i` and `j` counts one half toward each side.
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceMatrices {
    pub xstar: Vec<Vec<f64>>,
    pub astar: Vec<Vec<f64>>,
}

fn credit(label: &RankLabel, i: usize, j: usize) -> Q {
    match label.compare(i, j) {
        Ordering::Less => exact::qi(1),
        Ordering::Equal => exact::ratio(1, 2),
        Ordering::Greater => Q::zero(),
    }
}

pub fn dominance_matrices(d: &Decomposition) -> DominanceMatrices {
    let n = d.input_set.n_items();
    let count = exact::qi(d.regions.len().max(1) as i64);
    let mut xstar = vec![vec![0.0; n]; n];
    let mut astar = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (mut x, mut a) = (Q::zero(), Q::zero());
            for r in &d.regions {
                let c = credit(&r.label, i, j);
                a += &c * &r.exact_area;
                x += c;
            }
            xstar[i][j] = exact::to_f64(&(x / &count));
            astar[i][j] = exact::to_f64(&(a / simplex_area()));
        }
    }
    DominanceMatrices { xstar, astar }
}

/// Dominance matrices from grid cells: `xstar` over the distinct labels,
/// `astar` over cell shares.
pub fn grid_dominance(g: &GridColormap) -> DominanceMatrices {
    let n = g.labels.first().map_or(0, RankLabel::n_items);
    let total = g.cells.len().max(1) as f64;
    let distinct = g.labels.len().max(1) as f64;
    let mut xstar = vec![vec![0.0; n]; n];
    let mut astar = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (mut x, mut a) = (0.0, 0.0);
            for (label, &count) in g.labels.iter().zip(&g.label_counts) {
                let c = exact::to_f64(&credit(label, i, j));
                x += c;
                a += c * count as f64;
            }
            xstar[i][j] = x / distinct;
            astar[i][j] = a / total;
        }
    }
    DominanceMatrices { xstar, astar }
}

/// Mean position of each item over the grid cells.
pub fn grid_expected_ranking(g: &GridColormap) -> Vec<f64> {
    let n = g.labels.first().map_or(0, RankLabel::n_items);
    let total = g.cells.len().max(1) as f64;
    let mut sums = vec![0.0; n];
    for (label, &count) in g.labels.iter().zip(&g.label_counts) {
        for (s, &p) in sums.iter_mut().zip(label.positions()) {
            *s += f64::from(p) * count as f64;
        }
    }
    sums.into_iter().map(|s| s / total).collect()
}

/// Area-weighted mean of the region positions: the expected position of
/// each item under a uniformly random weight.
pub fn expected_ranking(d: &Decomposition) -> Vec<f64> {
    let n = d.input_set.n_items();
    let mut sums = vec![Q::zero(); n];
    for r in &d.regions {
        for (s, &p) in sums.iter_mut().zip(r.label.positions()) {
            *s += &r.exact_area * exact::qi(i64::from(p));
        }
    }
    sums.iter().map(|s| exact::to_f64(&(s / simplex_area()))).collect()
}

/// Area fraction of the weight set where `a` ranks above `b`, from the
/// single separating line of the pair. A pair tied everywhere counts one
/// half.
pub fn pairwise_dominance(input_set: &InputSet, a: usize, b: usize) -> Result<f64> {
    if a == b {
        return Err(Error::input("pairwise dominance needs two distinct items"));
    }
    let n = input_set.n_items();
    if a >= n || b >= n {
        return Err(Error::input(format!("item index out of range for {n} items")));
    }
    Ok(match classify_pair(input_set, a, b)? {
        PairClass::Unanimous { a_better } => {
            if a_better {
                1.0
            } else {
                0.0
            }
        }
        PairClass::Degenerate => 0.5,
        PairClass::Disagreeing(delta) => {
            let line = line_of(&delta)?;
            let side = polygon::clip(&SimplexPoint::corners(), &line);
            exact::to_f64(&(polygon::area(&side) / simplex_area()))
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyEdge {
    pub a: usize,
    pub b: usize,
    pub kind: ContactKind,
    /// Number of item pairs the two labels order differently.
    pub swap_distance: usize,
}

pub fn adjacency_graph(d: &Decomposition) -> Vec<AdjacencyEdge> {
    d.adjacency
        .iter()
        .map(|adj| {
            let (a, b) = adj.regions;
            AdjacencyEdge {
                a,
                b,
                kind: adj.kind,
                swap_distance: d.regions[a].label.swap_distance(&d.regions[b].label),
            }
        })
        .collect()
}

/// Position of `item` in every region label, in region order.
pub fn item_heatmap(d: &Decomposition, item: &str) -> Result<Vec<(usize, u32)>> {
    let idx = d
        .input_set
        .item_index(item)
        .ok_or_else(|| Error::input(format!("unknown item `{item}`")))?;
    Ok(d
        .regions
        .iter()
        .enumerate()
        .map(|(k, r)| (k, r.label.position(idx)))
        .collect())
}

/// Number of full-dimensional regions.
pub fn rankability(d: &Decomposition) -> usize {
    d.regions.len()
}

/// An edge line `n·x = c` with unit normal `n` pointing into the region.
#[derive(Debug, Clone, Copy, PartialEq)]
struct HalfPlane {
    n: [f64; 2],
    c: f64,
}

impl HalfPlane {
    /// Signed distance, positive inside.
    fn depth(&self, p: [f64; 2]) -> f64 {
        self.n[0] * p[0] + self.n[1] * p[1] - self.c
    }
}

fn half_planes(vertices: &[[f64; 2]]) -> Vec<HalfPlane> {
    let k = vertices.len();
    (0..k)
        .filter_map(|i| {
            let (p, q) = (vertices[i], vertices[(i + 1) % k]);
            let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
            let len = dx.hypot(dy);
            (len > 0.0).then(|| {
                // Counterclockwise order: the interior is on the left.
                let n = [-dy / len, dx / len];
                HalfPlane {
                    n,
                    c: n[0] * p[0] + n[1] * p[1],
                }
            })
        })
        .collect()
}

fn solve3(m: [[f64; 3]; 3], rhs: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    if d.abs() < 1e-14 {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, slot) in out.iter_mut().enumerate() {
        let mut mc = m;
        for row in 0..3 {
            mc[row][col] = rhs[row];
        }
        *slot = det(mc) / d;
    }
    Some(out)
}

/// Center and radius of the largest disk inside a convex counterclockwise
/// polygon.
///
/// The optimum of `max r` subject to `n_i·x − r ≥ c_i` is attained where
/// three constraints are tight, so every edge triple is tried.
pub fn chebyshev_center(vertices: &[[f64; 2]]) -> ([f64; 2], f64) {
    let planes = half_planes(vertices);
    let k = planes.len();
    let mut best = (mean(vertices), 0.0);
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                let rows = [planes[a], planes[b], planes[c]];
                let m = rows.map(|h| [h.n[0], h.n[1], -1.0]);
                let Some([x, y, r]) = solve3(m, rows.map(|h| h.c)) else {
                    continue;
                };
                if r > best.1 && planes.iter().all(|h| h.depth([x, y]) >= r - 1e-12) {
                    best = ([x, y], r);
                }
            }
        }
    }
    best
}

fn mean(vertices: &[[f64; 2]]) -> [f64; 2] {
    let k = vertices.len().max(1) as f64;
    let (sx, sy) = vertices.iter().fold((0.0, 0.0), |(x, y), v| (x + v[0], y + v[1]));
    [sx / k, sy / k]
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionSensitivity {
    /// Chebyshev center in equilateral coordinates.
    pub center: [f64; 2],
    pub radius: f64,
    planes: Vec<HalfPlane>,
}

impl RegionSensitivity {
    /// Normalized distance to the nearest edge line; negative outside.
    pub fn value(&self, p: [f64; 2]) -> f64 {
        let depth = self
            .planes
            .iter()
            .map(|h| h.depth(p))
            .fold(f64::INFINITY, f64::min);
        if self.radius > 0.0 {
            depth / self.radius
        } else {
            0.0
        }
    }
}

/// Robustness of a weight: its distance to the boundary of its region in
/// equilateral coordinates, divided by the region's largest such distance.
/// Zero on region edges and one at the region's Chebyshev center.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityField {
    pub regions: Vec<RegionSensitivity>,
}

impl SensitivityField {
    pub fn new(d: &Decomposition) -> Self {
        let regions = d
            .regions
            .iter()
            .map(|r| {
                let (center, radius) = chebyshev_center(&r.vertices_equilateral);
                RegionSensitivity {
                    center,
                    radius,
                    planes: half_planes(&r.vertices_equilateral),
                }
            })
            .collect();
        SensitivityField { regions }
    }

    /// Containing region and robustness at a point in equilateral
    /// coordinates.
    pub fn at_equilateral(&self, p: [f64; 2]) -> Option<(usize, f64)> {
        self.regions
            .iter()
            .enumerate()
            .map(|(k, r)| (k, r.value(p)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(k, v)| (k, v.clamp(0.0, 1.0)))
    }

    pub fn at(&self, lambda: &WeightVector) -> f64 {
        self.at_equilateral(to_equilateral(lambda)).map_or(0.0, |(_, v)| v)
    }
}

pub fn sensitivity(d: &Decomposition, lambda: &WeightVector) -> f64 {
    SensitivityField::new(d).at(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::{exact_decompose, DecomposeConfig};
    use crate::fixtures;

    fn decompose(set: &InputSet) -> Decomposition {
        exact_decompose(set, &DecomposeConfig::default()).unwrap()
    }

    #[test]
    fn single_region_analytics() {
        let r = vec![2, 3, 1];
        let set = InputSet::from_rankings(&[r.clone(), r.clone(), r]).unwrap();
        let d = decompose(&set);
        let bars = barchart(&d);
        assert_eq!(bars.len(), 1);
        assert_eq!(bars[0].1, 1.0);
        assert_eq!(expected_ranking(&d), vec![2.0, 3.0, 1.0]);
        let m = dominance_matrices(&d);
        assert_eq!(m.xstar[2][0], 1.0);
        assert_eq!(m.xstar[0][2], 0.0);
        assert_eq!(m.xstar, m.astar);
        assert!(adjacency_graph(&d).is_empty());
        assert_eq!(item_heatmap(&d, "T3").unwrap(), vec![(0, 1)]);
        assert!(item_heatmap(&d, "T9").is_err());
        assert_eq!(rankability(&d), 1);
    }

    #[test]
    fn symmetric_split_has_half_expectations() {
        let set = InputSet::from_rankings(&[vec![1, 2], vec![2, 1], vec![1, 1]]).unwrap();
        let d = decompose(&set);
        assert_eq!(d.regions.len(), 2);
        let e = expected_ranking(&d);
        assert!((e[0] - 1.5).abs() < 1e-12 && (e[1] - 1.5).abs() < 1e-12);
        assert_eq!(pairwise_dominance(&set, 0, 1).unwrap(), 0.5);
    }

    #[test]
    fn pairwise_dominance_cases() {
        let set = fixtures::anne();
        assert!((pairwise_dominance(&set, 0, 4).unwrap() - 0.96).abs() < 1e-12);
        assert!((pairwise_dominance(&set, 1, 2).unwrap() - 0.75).abs() < 1e-12);
        let unanimous = InputSet::from_rankings(&[vec![1, 2], vec![1, 2], vec![1, 1]]).unwrap();
        assert_eq!(pairwise_dominance(&unanimous, 0, 1).unwrap(), 1.0);
        assert_eq!(pairwise_dominance(&unanimous, 1, 0).unwrap(), 0.0);
        assert!(pairwise_dominance(&set, 2, 2).is_err());
        let d = decompose(&set);
        let m = dominance_matrices(&d);
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    let p = pairwise_dominance(&set, i, j).unwrap();
                    assert!((m.astar[i][j] - p).abs() < 1e-12, "({i},{j})");
                    assert!((m.astar[i][j] + m.astar[j][i] - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn grid_analytics_approach_exact_ones() {
        let set = fixtures::anne();
        let d = decompose(&set);
        let g = crate::decompose::grid_decompose(&set, 300, &crate::decompose::Utility::Linear).unwrap();
        let exact = expected_ranking(&d);
        for (a, b) in grid_expected_ranking(&g).iter().zip(&exact) {
            assert!((a - b).abs() < 0.02);
        }
        let (m, gm) = (dominance_matrices(&d), grid_dominance(&g));
        assert!((m.astar[0][4] - gm.astar[0][4]).abs() < 0.01);
        assert_eq!(grid_barchart(&g).iter().map(|b| b.1).sum::<f64>().round(), 1.0);
    }

    #[test]
    fn chebyshev_center_of_a_square() {
        let sq = [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]];
        let (c, r) = chebyshev_center(&sq);
        assert!((c[0] - 1.0).abs() < 1e-12 && (c[1] - 1.0).abs() < 1e-12);
        assert!((r - 1.0).abs() < 1e-12);
        let tri = [[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]];
        let (_, r) = chebyshev_center(&tri);
        assert!((r - 3f64.sqrt() / 6.0).abs() < 1e-12);
    }

    #[test]
    fn sensitivity_normalization() {
        let set = fixtures::anne();
        let d = decompose(&set);
        let field = SensitivityField::new(&d);
        for (k, r) in field.regions.iter().enumerate() {
            let (reg, v) = field.at_equilateral(r.center).unwrap();
            assert_eq!(reg, k);
            assert!((v - 1.0).abs() < 1e-9);
            let corner = d.regions[k].vertices_equilateral[0];
            assert!(r.value(corner).abs() < 1e-9);
        }
        assert_eq!(sensitivity(&d, &WeightVector::new([0.5, 0.5, 0.0]).unwrap()), 0.0);
    }
}
