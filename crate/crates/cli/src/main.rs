use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use simplexrank_cli::render::RenderKind;
use simplexrank_cli::{AnalyzeRequest, CliError, DecomposeOptions, MethodChoice};

#[derive(Parser)]
#[command(name = "simplexrank", version, about = "Weight-set decomposition for weighted rank aggregation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Grid,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Colormap,
    Barchart,
    ItemHeatmap,
    Sensitivity,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a problem file into indifference regions.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        method: Method,
        /// Grid resolution K (seed resolution for the exact method).
        #[arg(long)]
        grid_resolution: Option<u32>,
        /// Grid doublings allowed when the exact regions leave a gap.
        #[arg(long, default_value_t = 3)]
        max_refine: u32,
        /// Skip the edge probe when repairing coverage gaps.
        #[arg(long)]
        no_probe: bool,
        #[arg(long)]
        output: PathBuf,
    },
    /// Draw a decomposition as SVG.
    Render {
        #[arg(long)]
        decomp: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        item: Option<String>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Print dominance, matrices or the expected ranking.
    Analyze {
        #[arg(long)]
        decomp: PathBuf,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        pair: Option<Vec<String>>,
        #[arg(long)]
        matrices: bool,
        #[arg(long)]
        expected: bool,
    },
    /// Serve a decomposition over HTTP.
    Serve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Decompose {
            input,
            method,
            grid_resolution,
            max_refine,
            no_probe,
            output,
        } => {
            let options = DecomposeOptions {
                method: match method {
                    Method::Exact => MethodChoice::Exact,
                    Method::Grid => MethodChoice::Grid,
                },
                resolution: grid_resolution,
                max_refine,
                probe_edges: !no_probe,
            };
            simplexrank_cli::cmd_decompose(&input, &output, &options)
        }
        Command::Render {
            decomp,
            kind,
            item,
            output,
        } => {
            let kind = match kind {
                Kind::Colormap => RenderKind::Colormap,
                Kind::Barchart => RenderKind::Barchart,
                Kind::ItemHeatmap => RenderKind::ItemHeatmap,
                Kind::Sensitivity => RenderKind::Sensitivity,
            };
            simplexrank_cli::cmd_render(&decomp, kind, item.as_deref(), &output)
        }
        Command::Analyze {
            decomp,
            pair,
            matrices,
            expected,
        } => {
            let request = AnalyzeRequest {
                pair: pair.map(|p| (p[0].clone(), p[1].clone())),
                matrices,
                expected,
            };
            print!("{}", simplexrank_cli::cmd_analyze(&decomp, &request)?);
            Ok(())
        }
        Command::Serve { input, port, ui_dir } => simplexrank_cli::cmd_serve(&input, port, ui_dir),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
