//! File formats, rendering, analysis reports and the HTTP service behind
//! the `simplexrank` binary.

pub mod format;
pub mod palette;
pub mod render;
pub mod server;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use simplexrank::decompose::{exact_decompose, grid_decompose, DecomposeConfig};
use simplexrank::{analytics, Error};

use format::{DecompositionFile, FormatError, MethodRecord, ProblemFile};
use palette::Palette;

/// Failure of a command, with the process exit code it maps to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error("{0}")]
    Usage(String),
    #[error("incomplete decomposition written to {path}: regions cover {covered:.6} of the weight set")]
    Incomplete { path: String, covered: f64 },
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Format { .. } | CliError::Usage(_) => 2,
            CliError::Incomplete { .. } => 3,
            CliError::Other(_) => 1,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Other(anyhow::anyhow!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Other(anyhow::anyhow!("{}: {e}", path.display())))
}

fn format_error(path: &Path) -> impl Fn(FormatError) -> CliError + '_ {
    move |source| CliError::Format {
        path: path.display().to_string(),
        source,
    }
}

pub fn load_problem(path: &Path) -> Result<ProblemFile, CliError> {
    ProblemFile::parse(&read(path)?).map_err(format_error(path))
}

pub fn load_decomposition(path: &Path) -> Result<DecompositionFile, CliError> {
    DecompositionFile::parse(&read(path)?).map_err(format_error(path))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Exact,
    Grid,
}

#[derive(Debug, Clone)]
pub struct DecomposeOptions {
    pub method: MethodChoice,
    /// Grid resolution, or the seed resolution of the exact method.
    pub resolution: Option<u32>,
    pub max_refine: u32,
    pub probe_edges: bool,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            method: MethodChoice::Exact,
            resolution: None,
            max_refine: DecomposeConfig::default().max_refinements,
            probe_edges: true,
        }
    }
}

pub const DEFAULT_GRID_RESOLUTION: u32 = 200;

/// Decomposes a problem. An incomplete exact decomposition comes back as
/// `Ok((file, false))` with the partial regions.
pub fn decompose_problem(
    problem: &ProblemFile,
    options: &DecomposeOptions,
    palette: &Palette,
) -> Result<(DecompositionFile, bool), CliError> {
    let built = problem.build().map_err(|source| CliError::Format {
        path: "problem".into(),
        source,
    })?;
    match options.method {
        MethodChoice::Grid => {
            let k = options.resolution.unwrap_or(DEFAULT_GRID_RESOLUTION);
            let g = grid_decompose(&built.effective, k, &built.utility).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok((DecompositionFile::from_grid(problem, &built.effective, &g, palette), true))
        }
        MethodChoice::Exact => {
            if !built.utility.is_linear() {
                return Err(CliError::Usage(
                    "nonlinear utilities are decomposed on a grid only; use --method grid".into(),
                ));
            }
            let config = DecomposeConfig {
                seed_resolution: options.resolution.unwrap_or(DecomposeConfig::default().seed_resolution),
                max_refinements: options.max_refine,
                probe_edges: options.probe_edges,
            };
            match exact_decompose(&built.effective, &config) {
                Ok(d) => Ok((DecompositionFile::from_exact(problem, &d, true, palette), true)),
                Err(Error::Incomplete { partial, .. }) => {
                    Ok((DecompositionFile::from_exact(problem, &partial, false, palette), false))
                }
                Err(e) => Err(CliError::Other(e.into())),
            }
        }
    }
}

pub fn cmd_decompose(input: &Path, output: &Path, options: &DecomposeOptions) -> Result<(), CliError> {
    let problem = load_problem(input)?;
    let palette = Palette::from_env()?;
    let (file, complete) = decompose_problem(&problem, options, &palette).map_err(|e| match e {
        CliError::Format { source, .. } => CliError::Format {
            path: input.display().to_string(),
            source,
        },
        other => other,
    })?;
    write(output, &file.to_json())?;
    if complete {
        Ok(())
    } else {
        Err(CliError::Incomplete {
            path: output.display().to_string(),
            covered: file.covered_fraction,
        })
    }
}

pub fn cmd_render(
    decomp: &Path,
    kind: render::RenderKind,
    item: Option<&str>,
    output: &Path,
) -> Result<(), CliError> {
    let file = load_decomposition(decomp)?;
    let svg = render::render(&file, kind, item).map_err(|e| CliError::Usage(e.to_string()))?;
    write(output, &svg)
}

fn item_index(file: &DecompositionFile, name: &str) -> Result<usize, CliError> {
    file.items
        .iter()
        .position(|i| i == name)
        .ok_or_else(|| CliError::Usage(format!("unknown item `{name}`")))
}

fn csv_matrix(out: &mut String, title: &str, items: &[String], m: &[Vec<f64>]) {
    let _ = writeln!(out, "{title},{}", items.join(","));
    for (name, row) in items.iter().zip(m) {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.6}")).collect();
        let _ = writeln!(out, "{name},{}", cells.join(","));
    }
}

#[derive(Debug, Clone, Default)]
pub struct AnalyzeRequest {
    pub pair: Option<(String, String)>,
    pub matrices: bool,
    pub expected: bool,
}

/// The text report for `analyze`.
pub fn analyze(file: &DecompositionFile, request: &AnalyzeRequest) -> Result<String, CliError> {
    let mut out = String::new();
    if let Some((a, b)) = &request.pair {
        let (ia, ib) = (item_index(file, a)?, item_index(file, b)?);
        if ia == ib {
            return Err(CliError::Usage("--pair needs two different items".into()));
        }
        let value = match file.method {
            MethodRecord::Exact => {
                let set = file.input_set().map_err(format_error(Path::new("decomposition")))?;
                analytics::pairwise_dominance(&set, ia, ib).map_err(|e| CliError::Other(e.into()))?
            }
            MethodRecord::Grid => file.analytics.astar[ia][ib],
        };
        let _ = writeln!(out, "{value:.3}");
    }
    if request.matrices {
        csv_matrix(&mut out, "xstar", &file.items, &file.analytics.xstar);
        out.push('\n');
        csv_matrix(&mut out, "astar", &file.items, &file.analytics.astar);
    }
    if request.expected {
        let _ = writeln!(out, "item,expected_position");
        for (name, e) in file.items.iter().zip(&file.analytics.expected_ranking) {
            let _ = writeln!(out, "{name},{e:.6}");
        }
    }
    if request.pair.is_none() && !request.matrices && !request.expected {
        let _ = writeln!(out, "label,area_fraction");
        for bar in &file.analytics.barchart {
            let p: Vec<String> = bar.label.positions.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{},{:.6}", p.join(" "), bar.fraction);
        }
    }
    Ok(out)
}

pub fn cmd_analyze(decomp: &Path, request: &AnalyzeRequest) -> Result<String, CliError> {
    analyze(&load_decomposition(decomp)?, request)
}

pub fn cmd_serve(input: &Path, port: u16, ui_dir: Option<PathBuf>) -> Result<(), CliError> {
    let problem = load_problem(input)?;
    let palette = Palette::from_env()?;
    let (file, complete) = decompose_problem(&problem, &DecomposeOptions::default(), &palette)?;
    if !complete {
        eprintln!("warning: serving an incomplete decomposition");
    }
    let state = server::AppState::new(file)?;
    let runtime = tokio::runtime::Runtime::new().map_err(anyhow::Error::from)?;
    runtime.block_on(server::serve(state, ([127, 0, 0, 1], port).into(), ui_dir))?;
    Ok(())
}
