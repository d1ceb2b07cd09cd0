use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{error::ErrorKind, Parser, Subcommand};

use critplace::generators::{lower_bound_lines, DEFAULT_TILT};
use critplace::geom::ToleranceConfig;
use critplace::io::{svg, JunctionResult, PlacementResult, ResultFile, Scene};
use critplace::junctions::{grid_scan, top_k};
use critplace::oracle::{dense_scan, verify};
use critplace::perimeter::ShapeKind;
use critplace::placement::{arrangement_for, build_placement_arrangement, Epsilon};
use critplace::{Error, Rect, Result};

#[derive(Parser)]
#[command(name = "critplace", version, about = "Critical placements of a unit square or circle over lines and segments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute all critical curves for a scene of lines or segments.
    Critical {
        #[arg(long, value_parser = parse_shape)]
        shape: ShapeKind,
        #[arg(long)]
        eps: f64,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also add the placements with a square corner on an input line.
        #[arg(long)]
        include_line_translates: bool,
    },
    /// Compare a result file against a brute-force grid scan.
    OracleCheck {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        resolution: f64,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        curves: PathBuf,
        /// Matching distance; defaults to twice the resolution.
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Write the worst-case family of lines.
    Genlb {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TILT)]
        tilt: f64,
    },
    /// Score a grid of points for junction-likeness and report the top k.
    Junctions {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        spacing: f64,
        #[arg(long)]
        k: usize,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw a result file as SVG.
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        overlay: Option<PathBuf>,
    },
}

fn parse_shape(s: &str) -> std::result::Result<ShapeKind, String> {
    ShapeKind::parse(s).ok_or_else(|| format!("unknown shape `{s}` (square or circle)"))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))
}

fn read_scene(path: &Path) -> Result<Scene> {
    Scene::parse(&read(path)?)
}

/// Success, or a failed verification (exit 2).
enum Outcome {
    Done,
    Rejected,
}

fn run(cmd: Cmd) -> Result<Outcome> {
    match cmd {
        Cmd::Critical { shape, eps, input, out, include_line_translates } => {
            let prims = read_scene(&input)?.primitives()?;
            let e = Epsilon::new(shape, eps)?;
            let (arr, frame) = arrangement_for(&prims, eps, ToleranceConfig::default())?;
            let pa = build_placement_arrangement(&arr, frame, e, shape, include_line_translates)?;
            let r = ResultFile::new(Some(PlacementResult::new(&pa, include_line_translates)), None);
            write(&out, &r.to_json()?)?;
            eprintln!("{} curves, V={} E={} F={}", pa.curves.len(), pa.counts.vertices, pa.counts.edges, pa.counts.faces);
        }
        Cmd::OracleCheck { eps, resolution, input, curves, delta } => {
            if !(resolution > 0.0 && resolution.is_finite()) {
                return Err(Error::InvalidParameter(format!("resolution must be positive, got {resolution}")));
            }
            let prims = read_scene(&input)?.primitives()?;
            let r = ResultFile::from_json(&read(&curves)?)?;
            let p = r.placement.ok_or_else(|| Error::InvalidParameter("result has no curves".into()))?;
            if (p.eps - eps).abs() > 1e-9 * eps.abs().max(1.0) {
                return Err(Error::InvalidParameter(format!("result was computed for eps {}, not {eps}", p.eps)));
            }
            let delta = delta.unwrap_or(2.0 * resolution);
            let scan = dense_scan(&prims, p.shape, eps, p.region, resolution);
            let report = verify(&p.curves, &scan, resolution, delta, p.region);
            println!("{}", serde_json::to_string_pretty(&report)?);
            eprintln!(
                "{} scan points, {} missed, {} unsupported curve samples, {} clusters below resolution",
                scan.len(),
                report.missed_scan_points.len(),
                report.unsupported_curve_samples.len(),
                report.below_resolution
            );
            if !report.is_empty() {
                return Ok(Outcome::Rejected);
            }
        }
        Cmd::Genlb { n, eps, out, tilt } => {
            let lines = lower_bound_lines(n, eps, tilt)?;
            let mut text = format!("# {n} lines, eps {eps}, tilt {tilt}\n");
            text.push_str(&Scene::from_lines(&lines).emit());
            write(&out, &text)?;
        }
        Cmd::Junctions { eps, spacing, k, input, out } => {
            let scene = read_scene(&input)?;
            let mut bbox = Rect::empty();
            for t in &scene.trajectories {
                t.vertices.iter().for_each(|&v| bbox.include(v));
            }
            if bbox.is_empty() {
                return Err(Error::InvalidParameter("scene has no trajectories".into()));
            }
            let grid = grid_scan(&scene.trajectories, eps, bbox, spacing)?;
            let top = top_k(&grid, k)?;
            let r = ResultFile::new(None, Some(JunctionResult::new(eps, &grid, &top)));
            write(&out, &r.to_json()?)?;
            for j in &top.junctions {
                eprintln!("({}, {}) significance {} {:?}", j.point.x, j.point.y, j.assessment.significance, j.assessment.kind);
            }
            if top.fewer_than_k {
                eprintln!("only {} junction groups found", top.junctions.len());
            }
        }
        Cmd::Render { input, out, overlay } => {
            let r = ResultFile::from_json(&read(&input)?)?;
            let scene = overlay.as_deref().map(read_scene).transpose()?;
            write(&out, &svg::render(&r, scene.as_ref()))?;
        }
    }
    Ok(Outcome::Done)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.cmd) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Rejected) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
