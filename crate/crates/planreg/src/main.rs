//! Command-line front end: instance generation, single-pair solves,
//! all-pairs scan registration, map composition, and plot re-rendering.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Deserialize;

use planreg::instances::{generate_instance, Instance, InstanceSpec};
use planreg::posegraph::{compose_map, PoseEdge, PoseGraph};
use planreg::report::{PairRecord, RunReport, SolveSettings};
use planreg::{default_root_box, io, svg};
use planreg_core::{bnb, PointSet, RigidTransform2, SolveResult, SolverConfig, TransformBox};

#[derive(Parser)]
#[command(
    name = "planreg",
    version,
    about = "Globally optimal planar point-set registration"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random benchmark instance file
    Generate(GenerateArgs),
    /// Register one source/destination pair to certified global optimality
    Solve(SolveArgs),
    /// Register every unordered pair of scans in a directory
    Pairwise(PairwiseArgs),
    /// Compose per-scan poses from a pose graph and render the map
    Map(MapArgs),
    /// Re-render an SVG overlay from an existing result file
    Plot(PlotArgs),
}

/// Solver flags shared by solve and pairwise. Precedence: flags, then the
/// config file, then built-in defaults.
#[derive(Args, Clone)]
struct SolverOpts {
    /// Relative optimality tolerance
    #[arg(long)]
    eps: Option<f64>,
    /// Box-size threshold (scaled units) below which the relaxation bound
    /// joins in; 0 disables it
    #[arg(long)]
    delta: Option<f64>,
    /// Kept fraction of points; p = ceil(trim * n)
    #[arg(long)]
    trim: Option<f64>,
    /// Search box as "zx_min zx_max zy_min zy_max th_min th_max".
    /// Default: destination bounding box inflated by the source radius
    /// (largest source point norm), rotation in [0, 2*pi]. Any box known to
    /// contain the optimum works; tighter is faster.
    #[arg(long = "box", allow_hyphen_values = true)]
    search_box: Option<String>,
    /// Iteration cap; hitting it yields an uncertified result
    #[arg(long = "max-iter")]
    max_iter: Option<u64>,
    /// JSON config file with optional fields eps, delta, trim, box
    /// (6-element array), max_iter
    #[arg(long)]
    config: Option<PathBuf>,
    /// Exit 0 even when the result is not certified
    #[arg(long)]
    allow_uncertified: bool,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    eps: Option<f64>,
    delta: Option<f64>,
    trim: Option<f64>,
    #[serde(rename = "box")]
    search_box: Option<[f64; 6]>,
    max_iter: Option<u64>,
}

struct Resolved {
    settings: SolveSettings,
    box_override: Option<TransformBox>,
}

fn box_from_bounds(v: [f64; 6]) -> Result<TransformBox> {
    TransformBox::new(
        planreg_core::Point2::new(v[0], v[2]),
        planreg_core::Point2::new(v[1], v[3]),
        v[4],
        v[5],
    )
    .map_err(|e| anyhow::anyhow!("invalid search box: {e}"))
}

fn parse_box(text: &str) -> Result<TransformBox> {
    let fields: Vec<f64> = text
        .split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .with_context(|| format!("bad box component {t:?}"))
        })
        .collect::<Result<_>>()?;
    let v: [f64; 6] = fields
        .try_into()
        .map_err(|_| anyhow::anyhow!("--box needs exactly 6 numbers"))?;
    box_from_bounds(v)
}

impl SolverOpts {
    fn resolve(&self) -> Result<Resolved> {
        let file: ConfigFile = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing config {}", path.display()))?
            }
            None => ConfigFile::default(),
        };
        let defaults = SolveSettings::default();
        let settings = SolveSettings {
            eps: self.eps.or(file.eps).unwrap_or(defaults.eps),
            delta: self.delta.or(file.delta).unwrap_or(defaults.delta),
            trim: self.trim.or(file.trim).unwrap_or(defaults.trim),
            max_iterations: self
                .max_iter
                .or(file.max_iter)
                .unwrap_or(defaults.max_iterations),
        };
        if settings.eps <= 0.0 || settings.eps.is_nan() {
            bail!("--eps must be positive");
        }
        if settings.delta < 0.0 || settings.delta.is_nan() {
            bail!("--delta must be non-negative");
        }
        if settings.trim <= 0.0 || settings.trim > 1.0 || settings.trim.is_nan() {
            bail!("--trim must lie in (0, 1]");
        }
        let box_override = match (&self.search_box, file.search_box) {
            (Some(text), _) => Some(parse_box(text)?),
            (None, Some(v)) => Some(box_from_bounds(v)?),
            (None, None) => None,
        };
        Ok(Resolved {
            settings,
            box_override,
        })
    }
}

fn trim_count(trim: f64, n: usize) -> usize {
    ((trim * n as f64).ceil() as usize).clamp(1, n)
}

fn solver_config(resolved: &Resolved, src: &PointSet, dest: &PointSet) -> SolverConfig {
    let root = resolved
        .box_override
        .unwrap_or_else(|| default_root_box(src, dest));
    let mut cfg = SolverConfig::new(root, trim_count(resolved.settings.trim, src.len()));
    cfg.epsilon = resolved.settings.eps;
    cfg.delta = resolved.settings.delta;
    cfg.max_iterations = resolved.settings.max_iterations;
    cfg
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of points
    #[arg(long)]
    n: usize,
    /// Per-axis gaussian noise std for inliers
    #[arg(long)]
    sigma: f64,
    /// Outlier fraction; ceil(outliers * n) points are displaced uniformly
    #[arg(long, default_value_t = 0.1)]
    outliers: f64,
    /// Coordinate interval, per axis
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [-10.0, 10.0], allow_negative_numbers = true)]
    range: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output instance file (JSON)
    #[arg(long)]
    out: PathBuf,
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let mut spec = InstanceSpec::new(args.n, args.sigma, args.seed);
    spec.outlier_fraction = args.outliers;
    spec.coord_range = (args.range[0], args.range[1]);
    let inst = generate_instance(&spec)?;
    io::write_instance(&inst, &args.out)?;
    println!(
        "wrote {}: n={} sigma={} outliers={} seed={}",
        args.out.display(),
        spec.n,
        spec.sigma,
        inst.outlier_mask.iter().filter(|&&o| o).count(),
        spec.seed
    );
    Ok(())
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file produced by `generate` (mutually exclusive with
    /// --src/--dest)
    #[arg(long, conflicts_with_all = ["src", "dest"])]
    instance: Option<PathBuf>,
    /// Source point-set file
    #[arg(long, requires = "dest")]
    src: Option<PathBuf>,
    /// Destination point-set file
    #[arg(long, requires = "src")]
    dest: Option<PathBuf>,
    /// Result file (JSON)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-iteration bound trace (line-delimited JSON)
    #[arg(long)]
    trace: Option<PathBuf>,
    /// SVG overlay: source red, destination green, transformed source blue
    #[arg(long)]
    plot: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverOpts,
}

fn load_pair(args: &SolveArgs) -> Result<(PointSet, PointSet, Option<Instance>)> {
    match (&args.instance, &args.src, &args.dest) {
        (Some(path), None, None) => {
            let inst = io::read_instance(path)?;
            Ok((inst.src.clone(), inst.dest.clone(), Some(inst)))
        }
        (None, Some(s), Some(d)) => Ok((io::read_point_set(s)?, io::read_point_set(d)?, None)),
        _ => bail!("provide either --instance or both --src and --dest"),
    }
}

fn run_solve(
    src: &PointSet,
    dest: &PointSet,
    resolved: &Resolved,
    trace_path: Option<&Path>,
) -> Result<SolveResult> {
    let cfg = solver_config(resolved, src, dest);
    let result = match trace_path {
        Some(path) => {
            let mut records = Vec::new();
            let result = bnb::solve_traced(src, dest, &cfg, &mut |r| records.push(r))?;
            io::write_trace(&records, path)?;
            result
        }
        None => bnb::solve(src, dest, &cfg)?,
    };
    Ok(result)
}

fn cmd_solve(args: SolveArgs) -> Result<i32> {
    let resolved = args.solver.resolve()?;
    let (src, dest, instance) = load_pair(&args)?;
    let started = Instant::now();
    let result = run_solve(&src, &dest, &resolved, args.trace.as_deref())?;
    let elapsed = started.elapsed().as_secs_f64();

    if let Some(path) = &args.out {
        io::write_result(&result, path)?;
    }
    if let Some(path) = &args.plot {
        std::fs::write(path, svg::solve_plot(&src, &dest, &result.transform))
            .with_context(|| format!("writing {}", path.display()))?;
    }

    println!(
        "objective {:.6e}  gap {:.3e}  certified {}  iterations {}  time {:.3}s",
        result.objective, result.relative_gap, result.certified, result.stats.iterations, elapsed
    );
    println!(
        "transform: z = ({:.9}, {:.9})  theta = {:.9}",
        result.transform.z.x, result.transform.z.y, result.transform.theta
    );
    if let Some(inst) = instance {
        let dz = result.transform.z - inst.true_transform.z;
        let mut dth =
            (result.transform.theta - inst.true_transform.theta).abs() % planreg_core::geom::TAU;
        dth = dth.min(planreg_core::geom::TAU - dth);
        println!(
            "vs ground truth: |dz| = {:.3e}  |dtheta| = {:.3e}",
            dz.norm(),
            dth
        );
    }

    if !result.certified && !args.solver.allow_uncertified {
        eprintln!(
            "not certified within eps (iteration cap hit); pass --allow-uncertified to accept"
        );
        return Ok(2);
    }
    Ok(0)
}

#[derive(Args)]
struct PairwiseArgs {
    /// Directory of scan files (text point sets); node order is the sorted
    /// file-name order
    #[arg(long)]
    scans: PathBuf,
    /// Pose-graph output (JSON)
    #[arg(long)]
    out_graph: PathBuf,
    /// Run report output (JSON)
    #[arg(long)]
    out_report: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverOpts,
}

/// Readable scans as (file name, points), plus the skipped file names.
type ScanDir = (Vec<(String, PointSet)>, Vec<String>);

fn read_scan_dir(dir: &Path) -> Result<ScanDir> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading scan directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    let mut scans = Vec::new();
    let mut skipped = Vec::new();
    for path in paths {
        let name = path.display().to_string();
        match io::read_point_set(&path) {
            Ok(set) => scans.push((name, set)),
            Err(e) => {
                eprintln!("warning: skipping {name}: {e}");
                skipped.push(name);
            }
        }
    }
    Ok((scans, skipped))
}

fn cmd_pairwise(args: PairwiseArgs) -> Result<i32> {
    let resolved = args.solver.resolve()?;
    let (scans, skipped) = read_scan_dir(&args.scans)?;
    if scans.len() < 2 {
        bail!("need at least 2 readable scans, found {}", scans.len());
    }

    let pairs: Vec<(usize, usize)> = (0..scans.len())
        .flat_map(|i| ((i + 1)..scans.len()).map(move |j| (i, j)))
        .collect();
    let solved: Vec<(PairRecord, PoseEdge)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let started = Instant::now();
            let result = run_solve(&scans[i].1, &scans[j].1, &resolved, None)?;
            let record = PairRecord {
                i,
                j,
                objective: result.objective,
                wall_time_seconds: started.elapsed().as_secs_f64(),
                iterations: result.stats.iterations,
                certified: result.certified,
            };
            let edge = PoseEdge {
                i,
                j,
                weight: result.objective,
                transform: result.transform,
            };
            Ok((record, edge))
        })
        .collect::<Result<_>>()?;

    let mut report = RunReport::new(
        resolved.settings,
        scans.iter().map(|(n, _)| n.clone()).collect(),
        skipped,
    );
    let mut edges = Vec::new();
    for (record, edge) in solved {
        println!(
            "pair ({}, {}): objective {:.6e}  certified {}  {:.3}s",
            record.i, record.j, record.objective, record.certified, record.wall_time_seconds
        );
        report.pairs.push(record);
        edges.push(edge);
    }
    let graph = PoseGraph::new(scans.len(), edges)?;
    io::write_pose_graph(&graph, &args.out_graph)?;
    if let Some(path) = &args.out_report {
        io::write_report(&report, path)?;
    }

    let all_certified = report.pairs.iter().all(|p| p.certified);
    if !all_certified && !args.solver.allow_uncertified {
        eprintln!("some pairs are uncertified; pass --allow-uncertified to accept");
        return Ok(2);
    }
    Ok(0)
}

#[derive(Args)]
struct MapArgs {
    /// Pose-graph file from `pairwise`
    #[arg(long)]
    graph: PathBuf,
    /// Node whose frame becomes the map frame
    #[arg(long, default_value_t = 0)]
    reference: usize,
    /// Composed poses output (JSON)
    #[arg(long)]
    out_poses: PathBuf,
    /// SVG map; requires --scans for the point clouds
    #[arg(long, requires = "scans")]
    plot: Option<PathBuf>,
    /// Scan directory (same ordering as `pairwise`)
    #[arg(long)]
    scans: Option<PathBuf>,
    /// Kept fraction used to color map points as inliers (green crosses)
    /// vs outliers (red crosses) against the reference scan
    #[arg(long, default_value_t = 0.8)]
    trim: f64,
}

/// Inlier mask of `scan` (already mapped by `pose`) against the reference
/// cloud: the `ceil(trim * n)` points with the smallest nearest-neighbor
/// distances.
fn map_inlier_mask(
    scan: &PointSet,
    pose: &RigidTransform2,
    reference: &PointSet,
    trim: f64,
) -> Vec<bool> {
    let mut residuals: Vec<(f64, usize)> = scan
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let q = pose.apply(*p);
            let d = reference
                .iter()
                .map(|r| q.dist_sq(*r))
                .fold(f64::INFINITY, f64::min);
            (d, k)
        })
        .collect();
    residuals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let keep = trim_count(trim, scan.len());
    let mut mask = vec![false; scan.len()];
    for &(_, k) in &residuals[..keep] {
        mask[k] = true;
    }
    mask
}

fn cmd_map(args: MapArgs) -> Result<i32> {
    let graph = io::read_pose_graph(&args.graph)?;
    let poses = compose_map(&graph, args.reference)?;
    io::write_poses(&poses, &args.out_poses)?;
    println!(
        "composed {} poses (reference node {})",
        poses.len(),
        args.reference
    );

    if let Some(plot_path) = &args.plot {
        let dir = args
            .scans
            .as_ref()
            .expect("clap enforces --scans with --plot");
        let (scans, _) = read_scan_dir(dir)?;
        if scans.len() != graph.s {
            bail!(
                "scan directory has {} readable scans but the graph has {} nodes",
                scans.len(),
                graph.s
            );
        }
        let reference_scan = scans[args.reference].1.clone();
        let layers: Vec<(PointSet, Vec<bool>)> = scans
            .iter()
            .enumerate()
            .map(|(i, (_, scan))| {
                let mask = if i == args.reference {
                    vec![true; scan.len()]
                } else {
                    map_inlier_mask(scan, &poses[i], &reference_scan, args.trim)
                };
                (scan.clone(), mask)
            })
            .collect();
        std::fs::write(plot_path, svg::map_plot(&layers, &poses))
            .with_context(|| format!("writing {}", plot_path.display()))?;
    }
    Ok(0)
}

#[derive(Args)]
struct PlotArgs {
    /// Result file from `solve`
    #[arg(long)]
    result: PathBuf,
    /// Instance file (mutually exclusive with --src/--dest)
    #[arg(long, conflicts_with_all = ["src", "dest"])]
    instance: Option<PathBuf>,
    #[arg(long, requires = "dest")]
    src: Option<PathBuf>,
    #[arg(long, requires = "src")]
    dest: Option<PathBuf>,
    /// SVG output
    #[arg(long)]
    out: PathBuf,
}

fn cmd_plot(args: PlotArgs) -> Result<()> {
    let result = io::read_result(&args.result)?;
    let (src, dest) = match (&args.instance, &args.src, &args.dest) {
        (Some(path), None, None) => {
            let inst = io::read_instance(path)?;
            (inst.src, inst.dest)
        }
        (None, Some(s), Some(d)) => (io::read_point_set(s)?, io::read_point_set(d)?),
        _ => bail!("provide either --instance or both --src and --dest"),
    };
    std::fs::write(&args.out, svg::solve_plot(&src, &dest, &result.transform))
        .with_context(|| format!("writing {}", args.out.display()))?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(args) => cmd_generate(args).map(|()| 0),
        Command::Solve(args) => cmd_solve(args),
        Command::Pairwise(args) => cmd_pairwise(args),
        Command::Map(args) => cmd_map(args),
        Command::Plot(args) => cmd_plot(args).map(|()| 0),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}
