//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::sync::LazyLock;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simplexrank::analytics::{adjacency_graph, dominance_matrices, expected_ranking};
use simplexrank::exact::{q, qi, Q};
use simplexrank::extensions::{nonlinear_aggregate, partition_aggregate, reduce_to_triangle};
use simplexrank::geometry::{
    classify_pair, endpoints_of, equilateral_area_factor, line_of, projected_to_equilateral, side_of, PairClass,
    Side,
};
use simplexrank::polygon;
use simplexrank::*;
use simplexrank_cli::format::DecompositionFile;
use simplexrank_cli::palette::Palette;

const SUITE_SEED: u64 = 0x5eed_2024;
const SUITE_SIZE: usize = 50;
const GRID_K: u32 = 500;

struct Case {
    set: InputSet,
    /// All three inputs are permutations.
    tie_free: bool,
    decomposition: Decomposition,
    grid: GridColormap,
}

struct Suite {
    cases: Vec<Case>,
    elapsed: Duration,
}

/// 50 integer-ranking instances with `n ∈ {4..7}`; every other one may
/// contain tied inputs.
static SUITE: LazyLock<Suite> = LazyLock::new(|| {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    let sets: Vec<(InputSet, bool)> = (0..SUITE_SIZE)
        .map(|k| {
            let n = 4 + k % 4;
            let set = fixtures::random_instance(&mut rng, n, 3, k % 2 == 1);
            let tie_free = set.inputs().iter().all(|v| {
                let distinct: BTreeSet<u64> = v.values().iter().map(|x| x.to_bits()).collect();
                distinct.len() == v.len()
            });
            (set, tie_free)
        })
        .collect();
    let start = Instant::now();
    let cases = sets
        .into_iter()
        .map(|(set, tie_free)| {
            let decomposition = exact_decompose(&set, &DecomposeConfig::default()).expect("exact decomposition");
            let grid = grid_decompose(&set, GRID_K, &Utility::Linear).expect("grid decomposition");
            Case {
                set,
                tie_free,
                decomposition,
                grid,
            }
        })
        .collect();
    Suite {
        cases,
        elapsed: start.elapsed(),
    }
});

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn seg_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p[0] - a[0] - t * dx).hypot(p[1] - a[1] - t * dy)
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let suite = &*SUITE;
    let threshold = 2.0 / f64::from(GRID_K);
    let (mut checked, mut mismatches) = (0usize, 0usize);
    for case in &suite.cases {
        let d = &case.decomposition;
        let mut segments: BTreeSet<[u64; 4]> = BTreeSet::new();
        for r in &d.regions {
            let v: Vec<[f64; 2]> = r.vertices.iter().map(SimplexPoint::to_f64).collect();
            for k in 0..v.len() {
                let (a, b) = (v[k], v[(k + 1) % v.len()]);
                let (a, b) = if a <= b { (a, b) } else { (b, a) };
                segments.insert([a[0], a[1], b[0], b[1]].map(f64::to_bits));
            }
        }
        let segments: Vec<([f64; 2], [f64; 2])> = segments
            .into_iter()
            .map(|s| {
                let s = s.map(f64::from_bits);
                ([s[0], s[1]], [s[2], s[3]])
            })
            .collect();
        let k = f64::from(GRID_K);
        for cell in &case.grid.cells {
            let p = [f64::from(cell.i) / k, f64::from(cell.j) / k];
            if segments.iter().any(|(a, b)| seg_distance(p, *a, *b) <= threshold) {
                continue;
            }
            checked += 1;
            let containing: Vec<&IndifferenceRegion> =
                d.regions.iter().filter(|r| r.contains_f64(p, 0.0)).collect();
            if containing.len() != 1 || containing[0].label != *case.grid.label_of(cell) {
                mismatches += 1;
            }
        }
    }
    let total = start.elapsed();
    outcome(
        mismatches == 0 && checked > 0 && total < Duration::from_secs(60),
        format!(
            "{checked} interior grid points, {mismatches} mismatches, {:.1}s total ({:.1}s decomposing)",
            total.as_secs_f64(),
            suite.elapsed.as_secs_f64()
        ),
    )
}

fn tiling() -> Outcome {
    let target = 3f64.sqrt() / 4.0;
    let (mut worst, mut overlaps) = (0f64, 0usize);
    for case in &SUITE.cases {
        let d = &case.decomposition;
        let total: f64 = d.regions.iter().map(|r| r.area).sum();
        worst = worst.max((total - target).abs());
        for i in 0..d.regions.len() {
            for j in i + 1..d.regions.len() {
                let inter = polygon::intersect_convex(&d.regions[i].vertices, &d.regions[j].vertices);
                if polygon::area(&inter) != qi(0) {
                    overlaps += 1;
                }
            }
        }
    }
    outcome(
        worst <= 1e-6 && overlaps == 0,
        format!("max |Σ area − √3/4| = {worst:.2e}, {overlaps} overlapping pairs"),
    )
}

fn convexity() -> Outcome {
    let mut violations = 0;
    let mut regions = 0;
    for case in &SUITE.cases {
        for r in &case.decomposition.regions {
            regions += 1;
            if polygon::convex_hull(&r.vertices) != r.vertices {
                violations += 1;
            }
        }
    }
    outcome(violations == 0, format!("{regions} regions, {violations} differ from their hull"))
}

fn separation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut pairs, mut violations, mut short) = (0usize, 0usize, 0usize);
    for case in &SUITE.cases {
        let set = &case.set;
        let n = set.n_items();
        for a in 0..n {
            for b in a + 1..n {
                let Ok(PairClass::Disagreeing(delta)) = classify_pair(set, a, b) else { continue };
                pairs += 1;
                let line = line_of(&delta).unwrap();
                let d: Vec<f64> = (0..3).map(|k| set.value(k, a) - set.value(k, b)).collect();
                let mut counts = [0usize; 2];
                let mut tries = 0;
                while (counts[0] < 1000 || counts[1] < 1000) && tries < 2_000_000 {
                    tries += 1;
                    let (u, v): (f64, f64) = (rng.random(), rng.random());
                    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
                    let lam = [lo, hi - lo, 1.0 - hi];
                    // Oracle: exact sign of Σ λ_i δ_i.
                    let sum: Q = (0..3).map(|k| q(lam[k]) * q(d[k])).fold(qi(0), |acc, t| acc + t);
                    if simplexrank::exact::to_f64(&sum).abs() < 1e-6 {
                        continue;
                    }
                    let negative = sum < qi(0);
                    let bucket = usize::from(!negative);
                    if counts[bucket] >= 1000 {
                        continue;
                    }
                    counts[bucket] += 1;
                    let w = WeightVector::new(lam).unwrap();
                    let expect = if negative { Side::Below } else { Side::Above };
                    if side_of(&line, &w) != expect {
                        violations += 1;
                    }
                }
                if counts[0] < 1000 || counts[1] < 1000 {
                    short += 1;
                }
            }
        }
    }
    outcome(
        violations == 0 && short == 0,
        format!("{pairs} disagreeing pairs × 2000 weights, {violations} violations, {short} pairs undersampled"),
    )
}

fn corner_endpoints() -> Outcome {
    let (mut checked, mut violations) = (0usize, 0usize);
    for case in &SUITE.cases {
        let set = &case.set;
        let n = set.n_items();
        for a in 0..n {
            for b in a + 1..n {
                let Ok(PairClass::Disagreeing(delta)) = classify_pair(set, a, b) else { continue };
                let corners = endpoints_of(&delta).unwrap().iter().filter(|p| p.is_corner()).count();
                if case.tie_free {
                    checked += 1;
                    violations += usize::from(corners != 0);
                } else if delta.zero_count() == 1 {
                    checked += 1;
                    violations += usize::from(corners != 1);
                }
            }
        }
    }
    outcome(violations == 0 && checked > 0, format!("{checked} hyperplanes, {violations} violations"))
}

fn neighbor_swaps() -> Outcome {
    let (mut edges, mut points) = (0usize, 0usize);
    let (mut bad_edges, mut bad_points, mut shared_lines) = (0usize, 0usize, 0usize);
    for case in &SUITE.cases {
        let d = &case.decomposition;
        let planes = simplexrank::geometry::hyperplanes(&case.set).unwrap();
        for (adj, e) in d.adjacency.iter().zip(adjacency_graph(d)) {
            match e.kind {
                ContactKind::Edge => {
                    edges += 1;
                    if e.swap_distance != 1 {
                        bad_edges += 1;
                        let carrier = planes.iter().find(|h| adj.shared.iter().all(|p| h.line.contains(p)));
                        if carrier.is_some_and(|h| h.pairs.len() > 1) {
                            shared_lines += 1;
                        }
                    }
                }
                ContactKind::Point => {
                    points += 1;
                    bad_points += usize::from(e.swap_distance < 2);
                }
            }
        }
    }
    outcome(
        bad_edges == 0 && bad_points == 0,
        format!(
            "{bad_edges}/{edges} edge neighbors more than 1 swap apart ({shared_lines} across a line shared by several item pairs), {bad_points}/{points} point neighbors under 2 swaps"
        ),
    )
}

fn worked_golds() -> Outcome {
    let set = InputSet::from_rankings(&[vec![1, 2, 3, 4, 5], vec![1, 3, 2, 4, 5], vec![5, 1, 2, 3, 4]]).unwrap();
    let w = WeightVector::new([0.5, 0.5, 0.0]).unwrap();
    let agg = aggregate(&set, &w).unwrap();
    let agg_ok = agg.values() == [1.0, 2.5, 2.5, 4.0, 5.0] && rank_of(&agg).positions() == [1, 2, 2, 4, 5];

    let (mut checked, mut broken) = (0usize, 0usize);
    for case in SUITE.cases.iter().filter(|c| c.tie_free) {
        let d = &case.decomposition;
        if d.regions.iter().any(|r| r.label.has_ties()) {
            continue;
        }
        let m = dominance_matrices(d);
        let n = case.set.n_items();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    checked += 1;
                    broken += usize::from((m.xstar[i][j] - (1.0 - m.xstar[j][i])).abs() > 1e-12);
                }
            }
        }
    }

    let names = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let lists = [
        TopKList::new("efficacy", names(&["T1", "T2", "T3", "T4", "T5"])).unwrap(),
        TopKList::new("safety", names(&["T1", "T2", "T10", "T4", "T8"])).unwrap(),
        TopKList::new("cost", names(&["T2", "T3", "T6", "T5", "T4"])).unwrap(),
    ];
    let completed = complete_lists(&lists).unwrap();
    let order = ["T1", "T2", "T3", "T4", "T5", "T6", "T8", "T10"];
    let expected: [[f64; 8]; 3] = [
        [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 6.0, 6.0],
        [1.0, 2.0, 6.0, 4.0, 6.0, 6.0, 5.0, 3.0],
        [6.0, 1.0, 2.0, 5.0, 4.0, 3.0, 6.0, 6.0],
    ];
    let lists_ok = completed.n_items() == 8
        && (0..3).all(|k| {
            order
                .iter()
                .zip(expected[k])
                .all(|(item, want)| completed.item_index(item).is_some_and(|t| completed.value(k, t) == want))
        });

    outcome(
        agg_ok && broken == 0 && checked > 0 && lists_ok,
        format!(
            "aggregate {:?}; X* identity {}/{checked}; top-5 completion tied at 6: {lists_ok}",
            agg.values(),
            checked - broken
        ),
    )
}

fn equilateral() -> Outcome {
    let corners: Vec<[f64; 2]> = [[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]].into_iter().map(projected_to_equilateral).collect();
    let mut worst_side = 0f64;
    for i in 0..3 {
        for j in i + 1..3 {
            let d = (corners[i][0] - corners[j][0]).hypot(corners[i][1] - corners[j][1]);
            worst_side = worst_side.max((d - 1.0).abs());
        }
    }
    let mut worst_area = 0f64;
    for case in &SUITE.cases {
        for r in &case.decomposition.regions {
            let v = &r.vertices_equilateral;
            let shoelace: f64 = (0..v.len())
                .map(|k| {
                    let (a, b) = (v[k], v[(k + 1) % v.len()]);
                    a[0] * b[1] - b[0] * a[1]
                })
                .sum::<f64>()
                / 2.0;
            let projected = simplexrank::exact::to_f64(&r.exact_area);
            worst_area = worst_area.max((shoelace - projected * equilateral_area_factor()).abs());
        }
    }
    outcome(
        worst_side <= 1e-12 && worst_area <= 1e-12,
        format!("max side error {worst_side:.1e}, max area-scale error {worst_area:.1e}"),
    )
}

fn nonlinear() -> Outcome {
    let set = fixtures::anne();
    let f = NonlinearUtility::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut mismatches = 0;
    for _ in 0..10_000 {
        let (u, v): (f64, f64) = (rng.random(), rng.random());
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        let w = WeightVector::new([lo, hi - lo, 1.0 - hi]).unwrap();
        let direct = rank_of(&nonlinear_aggregate(&set, &f, &w).unwrap());
        let pulled = rank_of(&aggregate(&set, &nonlinear_normalize(&w)).unwrap());
        mismatches += usize::from(direct != pulled);
    }
    let (f0, f5, f1) = (sigmoid_f(0.0), sigmoid_f(0.5), sigmoid_f(1.0));
    let values_ok = f5 == 0.5 && (f0 - 0.006_692_9).abs() < 1e-6 && (f1 - 0.993_307_1).abs() < 1e-6;
    outcome(
        mismatches == 0 && values_ok,
        format!("{mismatches}/10000 mismatches; f(0)={f0:.7}, f(0.5)={f5}, f(1)={f1:.7}"),
    )
}

fn reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut mismatches = 0;
    for k in 0..10 {
        let j = 4 + k % 5;
        let n = rng.random_range(3..=7);
        let full = fixtures::random_instance(&mut rng, n, j, k % 2 == 0);
        let mut chosen: Vec<usize> = (0..j).collect();
        chosen.shuffle(&mut rng);
        let p1: f64 = rng.random();
        let config = PartitionConfig {
            chosen: [chosen[0], chosen[1], chosen[2]],
            fixed_weights: (0..j - 3).map(|_| rng.random_range(0.1..1.0)).collect(),
            p1,
            p2: 1.0 - p1,
        };
        let reduced = reduce_to_triangle(&full, &config).unwrap();
        for _ in 0..1000 {
            let (u, v): (f64, f64) = (rng.random(), rng.random());
            let (lo, hi) = if u < v { (u, v) } else { (v, u) };
            let w = WeightVector::new([lo, hi - lo, 1.0 - hi]).unwrap();
            let a = rank_of(&partition_aggregate(&full, &config, &w).unwrap());
            let b = rank_of(&aggregate(&reduced, &w).unwrap());
            mismatches += usize::from(a != b);
        }
    }
    outcome(mismatches == 0, format!("10 instances × 1000 weights, {mismatches} mismatches"))
}

fn monte_carlo() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut fixtures_list = vec![fixtures::anne()];
    fixtures_list.extend(SUITE.cases.iter().take(4).map(|c| c.set.clone()));
    let mut worst = 0f64;
    for set in &fixtures_list {
        let d = exact_decompose(set, &DecomposeConfig::default()).unwrap();
        let e = expected_ranking(&d);
        let n = set.n_items();
        let v: Vec<&[f64]> = set.inputs().iter().map(|s| s.values()).collect();
        let mut sums = vec![0f64; n];
        let samples = 1_000_000;
        for _ in 0..samples {
            let (a, b): (f64, f64) = (rng.random(), rng.random());
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let w = [lo, hi - lo, 1.0 - hi];
            let scores: Vec<f64> = (0..n).map(|t| w[0] * v[0][t] + w[1] * v[1][t] + w[2] * v[2][t]).collect();
            for (t, s) in sums.iter_mut().enumerate() {
                *s += 1.0 + scores.iter().filter(|x| **x < scores[t]).count() as f64;
            }
        }
        for (s, ex) in sums.iter().zip(&e) {
            worst = worst.max((s / samples as f64 - ex).abs());
        }
    }
    outcome(worst <= 0.01, format!("5 fixtures × 10^6 samples, max deviation {worst:.4}"))
}

fn cli_io() -> Outcome {
    let palette = Palette::default();
    let mut files = 0;
    let mut broken = Vec::new();
    for (k, case) in SUITE.cases.iter().enumerate().take(10) {
        let problem = problem_file(&case.set);
        let file = DecompositionFile::from_exact(&problem, &case.decomposition, true, &palette);
        let text = file.to_json();
        let parsed = DecompositionFile::parse(&text);
        files += 1;
        let same = parsed.as_ref().is_ok_and(|p| *p == file && p.to_json() == text);
        let rebuilt = parsed.ok().and_then(|p| p.to_decomposition().ok());
        if !same || rebuilt.as_ref() != Some(&case.decomposition) {
            broken.push(k);
        }
    }

    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("problem.json");
    std::fs::write(&input, problem_file(&fixtures::anne()).to_json()).unwrap();
    let decomp = dir.path().join("d.json");
    let bin = env!("CARGO_BIN_EXE_simplexrank");
    let ok = |c: &mut Command| c.env_remove("SIMPLEXRANK_PALETTE").status().is_ok_and(|s| s.success());
    let decompose_ok = ok(Command::new(bin).args(["decompose", "--input"]).arg(&input).arg("--output").arg(&decomp));
    let mut stable = decompose_ok;
    for kind in ["colormap", "barchart", "sensitivity"] {
        let (a, b) = (dir.path().join(format!("{kind}1.svg")), dir.path().join(format!("{kind}2.svg")));
        for out in [&a, &b] {
            stable &= ok(Command::new(bin)
                .args(["render", "--kind", kind, "--decomp"])
                .arg(&decomp)
                .arg("--output")
                .arg(out));
        }
        stable &= std::fs::read(&a).ok().is_some() && std::fs::read(&a).ok() == std::fs::read(&b).ok();
    }
    outcome(
        broken.is_empty() && stable,
        format!(
            "{}/{files} files round-trip, renders byte-stable: {stable}",
            files - broken.len()
        ),
    )
}

fn problem_file(set: &InputSet) -> simplexrank_cli::format::ProblemFile {
    let inputs: Vec<serde_json::Value> = set
        .inputs()
        .iter()
        .zip(set.input_names())
        .map(|(v, name)| serde_json::json!({"name": name, "kind": "ranking", "values": v.values()}))
        .collect();
    let items: Vec<&str> = set.items().iter().map(|i| i.name.as_str()).collect();
    let text = serde_json::json!({"version": 1, "items": items, "inputs": inputs}).to_string();
    simplexrank_cli::format::ProblemFile::parse(&text).unwrap()
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("oracle equivalence (exact vs grid)", oracle_equivalence),
        ("tiling", tiling),
        ("convexity", convexity),
        ("separation", separation),
        ("line endpoints at corners", corner_endpoints),
        ("neighbor swaps", neighbor_swaps),
        ("worked-example golds", worked_golds),
        ("equilateral transform", equilateral),
        ("nonlinear equivalence", nonlinear),
        ("j>=4 reduction", reduction),
        ("expected ranking vs monte carlo", monte_carlo),
        ("cli/io round trip and stable render", cli_io),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let o = check();
        println!("[{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
