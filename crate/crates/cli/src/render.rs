//! Deterministic SVG figures from a decomposition file.

use std::fmt::Write;

use simplexrank::analytics::chebyshev_center;

use crate::format::{DecompositionFile, GridRecord, MethodRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderKind {
    Colormap,
    Barchart,
    ItemHeatmap,
    Sensitivity,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("--item is required for item-heatmap")]
    MissingItem,
    #[error("unknown item `{0}`")]
    UnknownItem(String),
    #[error("{0} needs an exact decomposition")]
    NeedsExact(&'static str),
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 600.0;
const SCALE: f64 = 520.0;
const ORIGIN: [f64; 2] = [320.0, 540.0];

fn screen([x, y]: [f64; 2]) -> [f64; 2] {
    [ORIGIN[0] + x * SCALE, ORIGIN[1] - y * SCALE]
}

fn path_data(points: &[[f64; 2]]) -> String {
    let mut d = String::new();
    for (k, p) in points.iter().enumerate() {
        let [x, y] = screen(*p);
        let _ = write!(d, "{}{x:.3} {y:.3} ", if k == 0 { "M" } else { "L" });
    }
    d.push('Z');
    d
}

fn header(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, r##"<rect width="{width}" height="{height}" fill="#ffffff"/>"##);
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn label_text(positions: &[u32]) -> String {
    let parts: Vec<String> = positions.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

/// Input names at the corners where each input has full weight.
fn corners(out: &mut String, file: &DecompositionFile) {
    let h = 3f64.sqrt() / 2.0;
    let spots = [([0.5, 0.0], "start", 8.0, 18.0), ([0.0, h], "middle", 0.0, -10.0), ([-0.5, 0.0], "end", -8.0, 18.0)];
    for (input, (at, anchor, dx, dy)) in file.effective_inputs.iter().zip(spots) {
        let [x, y] = screen(at);
        let _ = writeln!(
            out,
            r#"<text class="corner" x="{:.3}" y="{:.3}" text-anchor="{anchor}" font-family="sans-serif" font-size="14">{}</text>"#,
            x + dx,
            y + dy,
            escape(&input.name)
        );
    }
}

fn outline(out: &mut String) {
    let h = 3f64.sqrt() / 2.0;
    let _ = writeln!(
        out,
        r##"<path class="simplex" d="{}" fill="none" stroke="#333333" stroke-width="1.5"/>"##,
        path_data(&[[0.5, 0.0], [0.0, h], [-0.5, 0.0]])
    );
}

/// Lattice cells as small squares, filled by `fill(label index)`.
fn grid_cells(out: &mut String, grid: &GridRecord, fill: impl Fn(usize) -> String) {
    let k = f64::from(grid.resolution);
    let side = SCALE / k;
    let mut idx = 0;
    for i in 0..=grid.resolution {
        for j in 0..=grid.resolution - i {
            let p = simplexrank::geometry::projected_to_equilateral([f64::from(i) / k, f64::from(j) / k]);
            let [x, y] = screen(p);
            let _ = writeln!(
                out,
                r#"<rect class="cell" x="{:.3}" y="{:.3}" width="{side:.3}" height="{side:.3}" fill="{}"/>"#,
                x - side / 2.0,
                y - side / 2.0,
                fill(grid.cells[idx])
            );
            idx += 1;
        }
    }
}

fn region_paths(out: &mut String, file: &DecompositionFile, fill: impl Fn(usize) -> String) {
    for (k, r) in file.regions.iter().enumerate() {
        let _ = writeln!(
            out,
            r##"<path class="region" d="{}" fill="{}" stroke="#ffffff" stroke-width="0.75"><title>{}</title></path>"##,
            path_data(&r.vertices_equilateral),
            fill(k),
            label_text(&r.label.positions)
        );
    }
}

pub fn colormap(file: &DecompositionFile) -> String {
    let mut out = String::new();
    header(&mut out, WIDTH, HEIGHT);
    match (&file.method, &file.grid) {
        (MethodRecord::Grid, Some(grid)) => grid_cells(&mut out, grid, |l| grid.colors[l].clone()),
        _ => region_paths(&mut out, file, |k| file.regions[k].color.clone()),
    }
    outline(&mut out);
    corners(&mut out, file);
    out.push_str("</svg>\n");
    out
}

/// Percentages with one decimal that sum to exactly 100.0 (largest
/// remainder rounding).
pub fn percentages(fractions: &[f64]) -> Vec<f64> {
    let total: f64 = fractions.iter().sum();
    if fractions.is_empty() || total <= 0.0 {
        return vec![0.0; fractions.len()];
    }
    let scaled: Vec<f64> = fractions.iter().map(|f| f / total * 1000.0).collect();
    let mut units: Vec<u64> = scaled.iter().map(|s| s.floor() as u64).collect();
    let short = 1000 - units.iter().sum::<u64>().min(1000);
    let mut order: Vec<usize> = (0..scaled.len()).collect();
    order.sort_by(|&a, &b| (scaled[b] - scaled[b].floor()).total_cmp(&(scaled[a] - scaled[a].floor())).then(a.cmp(&b)));
    for &k in order.iter().take(short as usize) {
        units[k] += 1;
    }
    units.into_iter().map(|u| u as f64 / 10.0).collect()
}

pub fn barchart(file: &DecompositionFile) -> String {
    let bars = &file.analytics.barchart;
    let bar_w = 36.0;
    let gap = 14.0;
    let (left, top, plot_h) = (60.0, 30.0, 360.0);
    let width = (left + bars.len() as f64 * (bar_w + gap) + 40.0).max(320.0);
    let height = top + plot_h + 120.0;
    let max = bars.iter().map(|b| b.fraction).fold(0.0, f64::max).max(1e-12);
    let pct = percentages(&bars.iter().map(|b| b.fraction).collect::<Vec<_>>());
    let mut out = String::new();
    header(&mut out, width, height);
    let base = top + plot_h;
    let _ = writeln!(
        out,
        r##"<line x1="{left}" y1="{base}" x2="{:.3}" y2="{base}" stroke="#333333"/>"##,
        width - 20.0
    );
    for (k, (bar, p)) in bars.iter().zip(&pct).enumerate() {
        let h = bar.fraction / max * plot_h;
        let x = left + gap / 2.0 + k as f64 * (bar_w + gap);
        let color = file
            .regions
            .iter()
            .find(|r| r.label == bar.label)
            .map(|r| r.color.clone())
            .or_else(|| {
                let grid = file.grid.as_ref()?;
                let i = grid.labels.iter().position(|l| *l == bar.label)?;
                Some(grid.colors[i].clone())
            })
            .unwrap_or_else(|| "#888888".into());
        let _ = writeln!(
            out,
            r#"<rect class="bar" x="{x:.3}" y="{:.3}" width="{bar_w}" height="{h:.3}" fill="{color}"/>"#,
            base - h
        );
        let _ = writeln!(
            out,
            r#"<text class="pct" x="{:.3}" y="{:.3}" text-anchor="middle" font-family="sans-serif" font-size="11">{p:.1}%</text>"#,
            x + bar_w / 2.0,
            base - h - 4.0
        );
        let _ = writeln!(
            out,
            r#"<text class="label" transform="translate({:.3},{:.3}) rotate(60)" font-family="monospace" font-size="11">{}</text>"#,
            x + bar_w / 2.0 - 4.0,
            base + 10.0,
            label_text(&bar.label.positions)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Light for good positions, dark for poor ones.
fn position_shade(position: u32, n: usize) -> String {
    let t = if n > 1 { f64::from(position - 1) / (n - 1) as f64 } else { 0.0 };
    let v = (240.0 - t * 200.0).round() as u8;
    format!("#{v:02x}{v:02x}{:02x}", v.saturating_add(12))
}

pub fn item_heatmap(file: &DecompositionFile, item: &str) -> Result<String, RenderError> {
    let idx = file
        .items
        .iter()
        .position(|i| i == item)
        .ok_or_else(|| RenderError::UnknownItem(item.to_string()))?;
    let n = file.items.len();
    let mut out = String::new();
    header(&mut out, WIDTH, HEIGHT);
    match (&file.method, &file.grid) {
        (MethodRecord::Grid, Some(grid)) => {
            grid_cells(&mut out, grid, |l| position_shade(grid.labels[l].positions[idx], n))
        }
        _ => region_paths(&mut out, file, |k| position_shade(file.regions[k].label.positions[idx], n)),
    }
    outline(&mut out);
    corners(&mut out, file);
    let _ = writeln!(
        out,
        r#"<text class="title" x="20" y="30" font-family="sans-serif" font-size="16">{}</text>"#,
        escape(item)
    );
    out.push_str("</svg>\n");
    Ok(out)
}

/// Keeps the part of `poly` where `n·x ≥ c`.
fn clip_f64(poly: &[[f64; 2]], n: [f64; 2], c: f64) -> Vec<[f64; 2]> {
    let side = |p: [f64; 2]| n[0] * p[0] + n[1] * p[1] - c;
    let mut out = Vec::new();
    for k in 0..poly.len() {
        let (p, q) = (poly[k], poly[(k + 1) % poly.len()]);
        let (sp, sq) = (side(p), side(q));
        if sp >= 0.0 {
            out.push(p);
        }
        if (sp >= 0.0) != (sq >= 0.0) {
            let t = sp / (sp - sq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

/// The region shrunk by `depth`: points at least that far from every edge.
fn inset(poly: &[[f64; 2]], depth: f64) -> Vec<[f64; 2]> {
    let mut cur = poly.to_vec();
    for k in 0..poly.len() {
        let (p, q) = (poly[k], poly[(k + 1) % poly.len()]);
        let len = (q[0] - p[0]).hypot(q[1] - p[1]);
        if len == 0.0 || cur.len() < 3 {
            continue;
        }
        let n = [-(q[1] - p[1]) / len, (q[0] - p[0]) / len];
        cur = clip_f64(&cur, n, n[0] * p[0] + n[1] * p[1] + depth);
    }
    cur
}

pub const SENSITIVITY_BANDS: usize = 5;

pub fn sensitivity(file: &DecompositionFile) -> Result<String, RenderError> {
    if file.method != MethodRecord::Exact {
        return Err(RenderError::NeedsExact("sensitivity"));
    }
    let mut out = String::new();
    header(&mut out, WIDTH, HEIGHT);
    for r in &file.regions {
        let (_, radius) = chebyshev_center(&r.vertices_equilateral);
        for band in 0..SENSITIVITY_BANDS {
            let t = band as f64 / SENSITIVITY_BANDS as f64;
            let poly = inset(&r.vertices_equilateral, t * radius);
            if poly.len() < 3 {
                break;
            }
            // Darker toward the most robust point.
            let v = (235.0 - t * 200.0).round() as u8;
            let _ = writeln!(
                out,
                r##"<path class="band" d="{}" fill="#{v:02x}{v:02x}{v:02x}" stroke="{}" stroke-width="{}"/>"##,
                path_data(&poly),
                if band == 0 { "#ffffff" } else { "none" },
                if band == 0 { "0.75" } else { "0" }
            );
        }
    }
    outline(&mut out);
    corners(&mut out, file);
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn render(file: &DecompositionFile, kind: RenderKind, item: Option<&str>) -> Result<String, RenderError> {
    match kind {
        RenderKind::Colormap => Ok(colormap(file)),
        RenderKind::Barchart => Ok(barchart(file)),
        RenderKind::ItemHeatmap => item_heatmap(file, item.ok_or(RenderError::MissingItem)?),
        RenderKind::Sensitivity => sensitivity(file),
    }
}
