//! Subcommand definitions and their runners.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use polyrange::exec::Exec;
use polyrange::hrnr_matrix::{region_polygon, sharp_vertices, Margin, MemberOptions, RegionStatus, Status};
use polyrange::hrnr_poly::{
    boundary_trace, companion_inclusion_check, grid_scan, member, montecarlo_region, sharp_points_poly, OriginCheck,
    RegionGrid, ScanOptions, Window,
};
use polyrange::matpoly::MatrixPolynomial;
use polyrange::numkit::CMatrix;
use polyrange::sylvester::{build_sylvester, common_roots, nonemptiness_probe_with, CommonRoots, DEFAULT_ROOT_TOL};
use polyrange::{Error, C64};
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::input::{polynomial_to_json, read_isometry, read_polynomial};
use crate::output::{grid_csv, grid_svg, points_csv, write_file, RunManifest};

/// Angular samples for exact polygons of constant matrices.
const POLYGON_NTHETA: usize = 4096;

#[derive(Debug, Parser)]
#[command(
    name = "polyrange",
    version,
    about = "Higher rank numerical ranges of matrix polynomials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a point lies in the rank-k numerical range.
    Member(MemberArgs),
    /// Rasterize the range over a window.
    Grid(GridArgs),
    /// Rasterize the intersection of random compressions' numerical ranges.
    Montecarlo(MontecarloArgs),
    /// Exact polygon of the rank-k numerical range of a constant matrix.
    MatrixRange(MatrixRangeArgs),
    /// Sylvester rank test for the compression by a given isometry.
    Sylvester(SylvesterArgs),
    /// Sharp boundary points, from a raster and (for pencils Iλ−A) from the exact polygon.
    Sharp(SharpArgs),
    /// Companion pencil and the inclusion check against it.
    Companion(CompanionArgs),
    /// Search for certified members through coordinate and random isometries.
    Probe(ProbeArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Polynomial document (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Rank k.
    #[arg(long)]
    pub k: usize,
}

#[derive(Debug, Args)]
pub struct Tuning {
    /// Coarse angular samples per membership test.
    #[arg(long, default_value_t = 256)]
    pub ntheta: usize,
    /// Absolute decision margin (default: 1e-8 scaled by the magnitude of L(μ)).
    #[arg(long)]
    pub margin: Option<f64>,
}

impl Tuning {
    fn options(&self) -> CliResult<MemberOptions> {
        if self.ntheta < 4 {
            return Err(CliError::Usage("--ntheta must be at least 4".into()));
        }
        let margin = match self.margin {
            Some(m) if m.is_finite() && m >= 0.0 => Margin::Absolute(m),
            Some(m) => {
                return Err(CliError::Usage(format!(
                    "--margin must be finite and non-negative, got {m}"
                )))
            }
            None => MemberOptions::default().margin,
        };
        Ok(MemberOptions {
            n_theta: self.ntheta,
            margin,
            ..MemberOptions::default()
        })
    }

    fn to_json(&self) -> serde_json::Value {
        json!({"ntheta": self.ntheta, "margin": self.margin.map_or(json!("auto"), |m| json!(m))})
    }
}

#[derive(Debug, Args)]
pub struct MemberArgs {
    #[command(flatten)]
    pub common: Common,
    /// Query point RE,IM.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub point: C64,
    #[command(flatten)]
    pub tuning: Tuning,
}

#[derive(Debug, Args)]
pub struct Raster {
    /// X0,X1,Y0,Y1
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    pub window: Window,
    /// NX,NY
    #[arg(long, value_parser = parse_res)]
    pub res: (usize, usize),
}

impl Raster {
    fn to_json(&self) -> serde_json::Value {
        let w = &self.window;
        json!({"window": [w.x_min, w.x_max, w.y_min, w.y_max], "res": [self.res.0, self.res.1]})
    }
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub raster: Raster,
    #[arg(long)]
    pub out_csv: PathBuf,
    #[arg(long)]
    pub out_svg: Option<PathBuf>,
    #[command(flatten)]
    pub tuning: Tuning,
}

#[derive(Debug, Args)]
pub struct MontecarloArgs {
    #[command(flatten)]
    pub common: Common,
    /// Number of random isometries.
    #[arg(long)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub raster: Raster,
    #[arg(long)]
    pub out_csv: PathBuf,
    #[arg(long)]
    pub out_svg: Option<PathBuf>,
    #[command(flatten)]
    pub tuning: Tuning,
}

#[derive(Debug, Args)]
pub struct MatrixRangeArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 256)]
    pub ntheta: usize,
    #[arg(long)]
    pub out_csv: PathBuf,
}

#[derive(Debug, Args)]
pub struct SylvesterArgs {
    #[command(flatten)]
    pub common: Common,
    /// Isometry document (JSON).
    #[arg(long)]
    pub isometry: PathBuf,
    /// Root certification tolerance.
    #[arg(long, default_value_t = DEFAULT_ROOT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SharpArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub raster: Raster,
    /// Boundary points on each side used to measure turning.
    #[arg(long, default_value_t = 6)]
    pub window_len: usize,
    /// Minimum turning angle (radians).
    #[arg(long, default_value_t = 1.2)]
    pub threshold: f64,
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
    #[command(flatten)]
    pub tuning: Tuning,
}

#[derive(Debug, Args)]
pub struct CompanionArgs {
    #[command(flatten)]
    pub common: Common,
    /// Test point RE,IM (repeatable).
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub point: Vec<C64>,
    /// Where to write the companion pencil as a polynomial document.
    #[arg(long)]
    pub out_json: Option<PathBuf>,
    #[command(flatten)]
    pub tuning: Tuning,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Root certification tolerance.
    #[arg(long, default_value_t = DEFAULT_ROOT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
}

fn parse_floats(s: &str, count: usize, what: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != count {
        return Err(format!("expected {what}"));
    }
    parts
        .iter()
        .map(|p| {
            let x: f64 = p
                .trim()
                .parse()
                .map_err(|_| format!("cannot parse {p:?} as a number"))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(format!("{p:?} is not finite"))
            }
        })
        .collect()
}

fn parse_point(s: &str) -> Result<C64, String> {
    let v = parse_floats(s, 2, "RE,IM")?;
    Ok(C64::new(v[0], v[1]))
}

fn parse_window(s: &str) -> Result<Window, String> {
    let v = parse_floats(s, 4, "X0,X1,Y0,Y1")?;
    Window::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

fn parse_res(s: &str) -> Result<(usize, usize), String> {
    match s
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
    {
        Ok(v) if v.len() == 2 && v[0] > 0 && v[1] > 0 => Ok((v[0], v[1])),
        _ => Err("expected NX,NY with positive integers".into()),
    }
}

fn fmt_point(z: C64) -> String {
    format!("{},{}", z.re, z.im)
}

fn scan_options(tuning: &Tuning) -> CliResult<ScanOptions> {
    Ok(ScanOptions {
        member: tuning.options()?,
        exec: Exec::default(),
    })
}

fn write_raster(
    grid: &RegionGrid,
    csv: &Path,
    svg: Option<&Path>,
    manifest: impl Fn(f64) -> RunManifest,
    start: Instant,
) -> CliResult<()> {
    write_file(csv, grid_csv(grid).as_bytes())?;
    if let Some(svg) = svg {
        write_file(svg, grid_svg(grid).as_bytes())?;
    }
    manifest(start.elapsed().as_secs_f64()).write_beside(csv)?;
    println!(
        "{} cells: {} IN, {} BORDER, {} OUT",
        grid.cells.len(),
        grid.count(Status::In),
        grid.count(Status::Border),
        grid.count(Status::Out)
    );
    Ok(())
}

/// Runs a subcommand and returns the process exit code.
pub fn run(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Member(a) => run_member(a),
        Command::Grid(a) => run_grid(a),
        Command::Montecarlo(a) => run_montecarlo(a),
        Command::MatrixRange(a) => run_matrix_range(a),
        Command::Sylvester(a) => run_sylvester(a),
        Command::Sharp(a) => run_sharp(a),
        Command::Companion(a) => run_companion(a),
        Command::Probe(a) => run_probe(a),
    }
}

fn run_member(a: MemberArgs) -> CliResult<i32> {
    let l = read_polynomial(&a.common.input)?;
    let r = member(&l, a.common.k, a.point, &a.tuning.options()?)?;
    match r.status {
        Status::In => println!("IN"),
        Status::Border => println!("BORDER"),
        Status::Out => println!("OUT theta={} support={} margin={}", r.theta, r.value, r.margin),
    }
    Ok(match r.status {
        Status::In => 0,
        Status::Out => 1,
        Status::Border => 2,
    })
}

fn run_grid(a: GridArgs) -> CliResult<i32> {
    let start = Instant::now();
    let l = read_polynomial(&a.common.input)?;
    let (nx, ny) = a.raster.res;
    let grid = grid_scan(&l, a.common.k, &a.raster.window, nx, ny, &scan_options(&a.tuning)?)?;
    let manifest = |t| {
        RunManifest::new(
            "grid",
            json!({
                "input": a.common.input, "k": a.common.k, "raster": a.raster.to_json(),
                "out_csv": a.out_csv, "out_svg": a.out_svg, "member": a.tuning.to_json(),
            }),
            None,
            t,
        )
    };
    write_raster(&grid, &a.out_csv, a.out_svg.as_deref(), manifest, start)?;
    Ok(0)
}

fn run_montecarlo(a: MontecarloArgs) -> CliResult<i32> {
    let start = Instant::now();
    let l = read_polynomial(&a.common.input)?;
    let (nx, ny) = a.raster.res;
    let grid = montecarlo_region(
        &l,
        a.common.k,
        a.samples,
        &a.raster.window,
        nx,
        ny,
        a.seed,
        &scan_options(&a.tuning)?,
    )?;
    let manifest = |t| {
        RunManifest::new(
            "montecarlo",
            json!({
                "input": a.common.input, "k": a.common.k, "samples": a.samples, "raster": a.raster.to_json(),
                "out_csv": a.out_csv, "out_svg": a.out_svg, "member": a.tuning.to_json(),
            }),
            Some(a.seed),
            t,
        )
    };
    write_raster(&grid, &a.out_csv, a.out_svg.as_deref(), manifest, start)?;
    Ok(0)
}

/// `A` from a document holding a single matrix (`m = 0`) or the pencil `Iλ − A`.
fn constant_matrix(l: &MatrixPolynomial) -> CliResult<CMatrix> {
    match l.degree() {
        0 => Ok(l.coefficient(0).clone()),
        1 if *l.coefficient(1) == CMatrix::identity(l.n()) => Ok(l.coefficient(0).scale(C64::new(-1.0, 0.0))),
        _ => Err(CliError::Usage(
            "input must be a single matrix (m = 0) or a pencil Iλ − A (m = 1, A_1 = I)".into(),
        )),
    }
}

fn run_matrix_range(a: MatrixRangeArgs) -> CliResult<i32> {
    let start = Instant::now();
    let l = read_polynomial(&a.common.input)?;
    let m = constant_matrix(&l)?;
    let region = region_polygon(&m, a.common.k, a.ntheta)?;
    let vertices: &[C64] = match region.status {
        RegionStatus::Empty => &[],
        RegionStatus::Unbounded => return Err(CliError::Software("constant matrix gave an unbounded region".into())),
        _ => &region.vertices,
    };
    write_file(&a.out_csv, points_csv(vertices).as_bytes())?;
    let manifest = RunManifest::new(
        "matrix-range",
        json!({"input": a.common.input, "k": a.common.k, "ntheta": a.ntheta, "out_csv": a.out_csv}),
        None,
        start.elapsed().as_secs_f64(),
    );
    manifest.write_beside(&a.out_csv)?;
    match region.status {
        RegionStatus::Empty => println!("EMPTY"),
        RegionStatus::Point => println!("POINT {}", fmt_point(vertices[0])),
        RegionStatus::Segment => println!("SEGMENT 2 vertices"),
        _ => println!("POLYGON {} vertices", vertices.len()),
    }
    Ok(0)
}

fn check_isometry_shape(l: &MatrixPolynomial, k: usize, n_rows: usize, n_cols: usize) -> CliResult<()> {
    if n_rows != l.n() || n_cols != k {
        return Err(CliError::Usage(format!(
            "isometry is {n_rows}x{n_cols}, expected {}x{k}",
            l.n()
        )));
    }
    Ok(())
}

fn run_sylvester(a: SylvesterArgs) -> CliResult<i32> {
    let l = read_polynomial(&a.common.input)?;
    let k = a.common.k;
    let q = read_isometry(&a.isometry)?;
    check_isometry_shape(&l, k, q.n(), q.k())?;
    let m = l.degree();
    match build_sylvester(&l.scalar_entries(&q)?) {
        Err(Error::DegenerateAllZero) => {
            println!("all compressed entries vanish identically");
            println!("every complex number is a member");
            return Ok(0);
        }
        Err(e) => return Err(e.into()),
        Ok(rec) => {
            println!("sigma={} tau={}", rec.sigma, rec.tau);
            println!("size={}x{}", rec.matrix.rows(), rec.matrix.cols());
            println!("rank={}", rec.rank);
            println!("delta={}", rec.delta);
            if rec.rank < 2 * m {
                println!("verdict: rank {} < 2m={}", rec.rank, 2 * m);
            } else {
                println!("verdict: rank {} not < 2m={}", rec.rank, 2 * m);
            }
        }
    }
    let opts = MemberOptions::default();
    match common_roots(&l, k, &q, a.tol)? {
        CommonRoots::AllOfC => println!("every complex number is a common root"),
        CommonRoots::Roots(roots) if roots.is_empty() => println!("certified roots: none"),
        CommonRoots::Roots(roots) => {
            println!("certified roots: {}", roots.len());
            for z in roots {
                println!(
                    "root {} member={}",
                    fmt_point(z),
                    member(&l, k, z, &opts)?.status.as_str()
                );
            }
        }
    }
    Ok(0)
}

fn run_sharp(a: SharpArgs) -> CliResult<i32> {
    let start = Instant::now();
    let l = read_polynomial(&a.common.input)?;
    let k = a.common.k;
    if !(a.threshold.is_finite() && a.threshold > 0.0) || a.window_len == 0 {
        return Err(CliError::Usage(
            "--threshold must be positive and --window-len at least 1".into(),
        ));
    }
    let (nx, ny) = a.raster.res;
    let grid = grid_scan(&l, k, &a.raster.window, nx, ny, &scan_options(&a.tuning)?)?;
    let boundary = boundary_trace(&grid);
    let mut rows: Vec<(C64, f64, &str)> = sharp_points_poly(&boundary, a.window_len, a.threshold)
        .into_iter()
        .map(|p| (p.point, p.turning_angle, "raster"))
        .collect();
    if boundary.clipped {
        println!("note: the region touches the window edge; points there are not reported");
    }
    if let Ok(m) = constant_matrix(&l) {
        if l.degree() == 1 {
            let region = region_polygon(&m, k, POLYGON_NTHETA)?;
            rows.extend(
                sharp_vertices(&region, a.threshold)
                    .into_iter()
                    .map(|v| (v.vertex, v.aperture, "polygon")),
            );
        }
    }
    for (z, angle, source) in &rows {
        println!("{source} {} angle={angle}", fmt_point(*z));
    }
    if rows.is_empty() {
        println!("no sharp points found");
    }
    if let Some(path) = &a.out_csv {
        let mut s = String::from("x,y,angle,source\n");
        for (z, angle, source) in &rows {
            s.push_str(&format!("{},{},{angle},{source}\n", z.re, z.im));
        }
        write_file(path, s.as_bytes())?;
        RunManifest::new(
            "sharp",
            json!({
                "input": a.common.input, "k": k, "raster": a.raster.to_json(), "window_len": a.window_len,
                "threshold": a.threshold, "polygon_ntheta": POLYGON_NTHETA, "out_csv": path, "member": a.tuning.to_json(),
            }),
            None,
            start.elapsed().as_secs_f64(),
        )
        .write_beside(path)?;
    }
    Ok(0)
}

fn run_companion(a: CompanionArgs) -> CliResult<i32> {
    let start = Instant::now();
    let l = read_polynomial(&a.common.input)?;
    let pencil = l.companion()?.to_polynomial()?;
    println!("companion pencil: {}x{}", pencil.n(), pencil.n());
    if let Some(path) = &a.out_json {
        let mut text =
            serde_json::to_string(&polynomial_to_json(&pencil)).map_err(|e| CliError::Software(e.to_string()))?;
        text.push('\n');
        write_file(path, text.as_bytes())?;
        RunManifest::new(
            "companion",
            json!({
                "input": a.common.input, "k": a.common.k,
                "points": a.point.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "out_json": path, "member": a.tuning.to_json(),
            }),
            None,
            start.elapsed().as_secs_f64(),
        )
        .write_beside(path)?;
    }
    let report = companion_inclusion_check(&l, a.common.k, &a.point, &a.tuning.options()?)?;
    for p in &report.points {
        let companion = p.status_companion.map_or("-", Status::as_str);
        println!(
            "point {} L={} companion={} {}",
            fmt_point(p.point),
            p.status_l.as_str(),
            companion,
            if p.pass { "PASS" } else { "FAIL" }
        );
    }
    match report.origin {
        OriginCheck::NotApplicable => println!("origin: not applicable for degree 1"),
        OriginCheck::Checked { status, pass } => {
            println!(
                "origin companion={} {}",
                status.as_str(),
                if pass { "PASS" } else { "FAIL" }
            )
        }
    }
    if report.passed() {
        println!("inclusion PASS");
        Ok(0)
    } else {
        println!("inclusion FAIL");
        Ok(1)
    }
}

fn run_probe(a: ProbeArgs) -> CliResult<i32> {
    let start = Instant::now();
    let l = read_polynomial(&a.common.input)?;
    let report = nonemptiness_probe_with(&l, a.common.k, a.samples, a.seed, a.tol, Exec::default())?;
    if report.all_of_c.is_some() {
        println!("an isometry with identically vanishing compression exists: every complex number is a member");
    }
    for h in &report.hits {
        match h.sample {
            Some(s) => println!("member {} sample={s}", fmt_point(h.point)),
            None => println!("member {} coordinate isometry", fmt_point(h.point)),
        }
    }
    if !report.found() {
        println!(
            "no member found in {} samples (this does not prove emptiness)",
            report.samples
        );
    } else {
        println!("{} certified points", report.hits.len());
    }
    if let Some(path) = &a.out_csv {
        let points: Vec<C64> = report.hits.iter().map(|h| h.point).collect();
        let mut text = points_csv(&points);
        if text.is_empty() {
            text.push_str("x,y\n");
        }
        write_file(path, text.as_bytes())?;
        RunManifest::new(
            "probe",
            json!({"input": a.common.input, "k": a.common.k, "samples": a.samples, "tol": a.tol, "out_csv": path}),
            Some(a.seed),
            start.elapsed().as_secs_f64(),
        )
        .write_beside(path)?;
    }
    Ok(0)
}
