//! `gparea`: batch front end for the gparea library.

mod output;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use gparea::area_est::{
    borchardt_area, estimate_cells, lagrange_area, lantern_area_closed_form, lantern_mesh_area,
    mesh_area, schwarz_lantern, triangulate, AreaEstimate, CellRule, Method, DEFAULT_DIRS,
    DEFAULT_K, DEFAULT_MAX_LEVEL, DEFAULT_TOL, SURFACE_GRID,
};
use gparea::curves::{curve_bivector, curve_bivector_auto, curve_bivector_richardson, enclosed_area};
use gparea::exterior::{Point3, Vector3};
use gparea::polytope::{
    boundary_edges, euler_characteristic, forces_reduce, mesh_from_json, mesh_is_closed,
    mesh_volume, parse_obj, polygon_area_signed, polygon_bivector, TriMesh,
};
use gparea::schema::{parse_json, CurveSpec, ForcesSpec, MotionSpec, PolygonSpec, SurfaceSpec};
use gparea::sweep::{sweep_area, tangent_cluster_area};

use output::{Cell, Report};

const AFTER_HELP: &str = "\
CSV columns (fixed order):
  lantern              m,n,vertices,triangles,boundary_edges,mesh_area,closed_form
  lantern --vertices   index,x,y,z
  lantern --sweep      m,n,triangles,closed_form,mesh_area,limit
  surface              method,level,cells,value,delta
  surface (borchardt)  method,h,samples,seed,value,std_error
  curve-bivector       n,yz,zx,xy,magnitude,enclosed_area
  polygon-area         yz,zx,xy,magnitude,signed_area
  mesh                 quantity,value
  forces               px,py,pz,rx,ry,rz,myz,mzx,mxy
  sweep                mode,n,area

Exit status: 0 on success, 1 on usage or input errors, 2 when a computation fails.
GPAREA_THREADS caps the number of worker threads (0 or unset = one per core).";

#[derive(Parser, Debug)]
#[command(name = "gparea", version, about = "Oriented areas, bi-vectors and surface-area functionals")]
#[command(after_help = AFTER_HELP)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Emit::Csv, global = true)]
    emit: Emit,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Schwarz lantern areas, vertices and divergence sweeps.
    Lantern(LanternArgs),
    /// Area of a parametric surface by one of the area functionals.
    Surface(SurfaceArgs),
    /// Bi-vector of a closed curve.
    CurveBivector(CurveArgs),
    /// Bi-vector and signed area of a closed polygon.
    PolygonArea(PolygonArgs),
    /// Closedness, Euler characteristic, volume and area of a triangle mesh.
    Mesh(MeshArgs),
    /// Reduction of a force system to a resultant through a point and a couple.
    Forces(ForcesArgs),
    /// Area swept by a moving segment in the plane.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct LanternArgs {
    /// Number of vertices per ring.
    #[arg(long, required_unless_present = "sweep")]
    m: Option<usize>,
    /// Number of layers.
    #[arg(long, required_unless_present = "sweep")]
    n: Option<usize>,
    /// List the vertices instead of the summary row.
    #[arg(long, conflicts_with = "sweep")]
    vertices: bool,
    /// Sweep rule `m:EXPR`, EXPR one of `m`, `m^K`, `C*m^K` or a constant.
    #[arg(long, conflicts_with_all = ["m", "n"])]
    sweep: Option<String>,
    /// First m of the sweep; m doubles each row.
    #[arg(long, default_value_t = 10, requires = "sweep")]
    m_min: usize,
    /// Last m of the sweep (inclusive).
    #[arg(long, default_value_t = 80, requires = "sweep")]
    m_max: usize,
    /// Also sum the triangle areas in a sweep (the closed form is always given).
    #[arg(long, requires = "sweep")]
    mesh_area: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Lagrange,
    Peano,
    Geocze,
    PeanoGeom,
    Borchardt,
}

#[derive(Args, Debug)]
struct SurfaceArgs {
    /// Surface definition (JSON).
    #[arg(long)]
    def: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Lagrange)]
    method: MethodArg,
    /// Grid size for lagrange (default 256) and for triangulating before borchardt (default 128).
    #[arg(long)]
    grid: Option<usize>,
    /// Relative stopping tolerance of the cell-based estimators.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
    max_level: usize,
    /// Projection directions for peano-geom.
    #[arg(long, default_value_t = DEFAULT_DIRS)]
    dirs: usize,
    /// Boundary samples per cell edge.
    #[arg(long, default_value_t = DEFAULT_K)]
    k: usize,
    /// Tube radius for borchardt.
    #[arg(long, default_value_t = 0.01)]
    h: f64,
    /// Monte Carlo samples for borchardt.
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct CurveArgs {
    /// Curve definition (JSON).
    #[arg(long)]
    def: PathBuf,
    /// Refine until successive sums agree to this relative tolerance.
    #[arg(long, conflicts_with = "n")]
    tol: Option<f64>,
    /// Fixed number of chords.
    #[arg(long)]
    n: Option<usize>,
    /// Combine the sums at n and 2n to cancel the leading error term.
    #[arg(long, requires = "n")]
    richardson: bool,
}

#[derive(Args, Debug)]
struct PolygonArgs {
    /// Polygon definition (JSON with `points` and optional unit `normal`).
    #[arg(long)]
    points: PathBuf,
}

#[derive(Args, Debug)]
struct MeshArgs {
    /// Mesh file, `.obj` or `.json`.
    #[arg(long)]
    file: PathBuf,
    #[arg(long)]
    volume: bool,
    #[arg(long)]
    euler: bool,
    #[arg(long)]
    closed: bool,
    #[arg(long)]
    area: bool,
    /// Base point for the volume.
    #[arg(long, value_parser = parse_point, default_value = "0,0,0")]
    at: [f64; 3],
}

#[derive(Args, Debug)]
struct ForcesArgs {
    /// Force system definition (JSON).
    #[arg(long)]
    def: PathBuf,
    /// Reduction point.
    #[arg(long, value_parser = parse_point, default_value = "0,0,0")]
    at: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepMode {
    Sweep,
    Cluster,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Segment motion definition (JSON).
    #[arg(long)]
    def: PathBuf,
    #[arg(long, value_enum, default_value_t = SweepMode::Sweep)]
    mode: SweepMode,
    /// Time steps.
    #[arg(long, default_value_t = 4096)]
    n: usize,
}

fn parse_point(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,z, got `{s}`"));
    }
    let mut p = [0.0_f64; 3];
    for (slot, part) in p.iter_mut().zip(parts) {
        *slot = part.trim().parse().map_err(|e| format!("`{part}`: {e}"))?;
        if !slot.is_finite() {
            return Err(format!("`{part}` is not finite"));
        }
    }
    Ok(p)
}

enum Failure {
    /// Bad arguments or unreadable / malformed input: exit 1.
    Input(String),
    /// The computation itself failed: exit 2.
    Compute(String),
}

impl From<gparea::Error> for Failure {
    fn from(e: gparea::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

type CmdResult = Result<Report, Failure>;

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Reads and validates an input file; any failure here is an input error.
fn load<T, S>(path: &Path, build: impl FnOnce(&S) -> gparea::Result<T>) -> Result<T, Failure>
where
    S: serde::de::DeserializeOwned,
{
    let text = read_input(path)?;
    let ctx = |e: gparea::Error| Failure::Input(format!("{}: {e}", path.display()));
    let spec: S = parse_json(&text).map_err(ctx)?;
    build(&spec).map_err(ctx)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    let report = match dispatch(&cli.command) {
        Ok(r) => r,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let text = match cli.emit {
        Emit::Csv => report.csv(),
        Emit::Json => report.json(),
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("GPAREA_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("GPAREA_THREADS must be a non-negative integer, got `{raw}`"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn dispatch(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Lantern(a) => lantern(a),
        Command::Surface(a) => surface(a),
        Command::CurveBivector(a) => curve(a),
        Command::PolygonArea(a) => polygon(a),
        Command::Mesh(a) => mesh(a),
        Command::Forces(a) => forces(a),
        Command::Sweep(a) => sweep(a),
    }
}

/// `n = c·m^k`, or a constant `n` when `k = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct SweepRule {
    c: f64,
    k: u32,
}

impl SweepRule {
    fn parse(s: &str) -> Result<Self, String> {
        let bad = || format!("sweep rule must look like m:m, m:m^K, m:C*m^K or m:N, got `{s}`");
        let rhs = s.strip_prefix("m:").ok_or_else(bad)?.trim();
        if let Ok(n) = rhs.parse::<usize>() {
            return Ok(SweepRule { c: n as f64, k: 0 });
        }
        let (c, power) = match rhs.split_once('*') {
            Some((c, p)) => (c.trim().parse::<f64>().map_err(|_| bad())?, p.trim()),
            None => (1.0, rhs),
        };
        let k = match power.strip_prefix('m') {
            Some("") => 1,
            Some(exp) => exp.strip_prefix('^').and_then(|e| e.parse().ok()).ok_or_else(bad)?,
            None => return Err(bad()),
        };
        if !(c > 0.0 && c.is_finite()) {
            return Err(bad());
        }
        Ok(SweepRule { c, k })
    }

    fn n(&self, m: usize) -> usize {
        ((self.c * (m as f64).powi(self.k as i32)).round() as usize).max(1)
    }

    /// Limit of the lantern area as `m → ∞` along this rule.
    fn limit(&self) -> f64 {
        match self.k {
            0 | 1 => 2.0 * PI,
            2 => 2.0 * PI * (1.0 + self.c * self.c * PI.powi(4) / 4.0).sqrt(),
            _ => f64::INFINITY,
        }
    }
}

fn lantern(a: &LanternArgs) -> CmdResult {
    if let Some(rule) = &a.sweep {
        return lantern_sweep(a, SweepRule::parse(rule).map_err(Failure::Input)?);
    }
    let (m, n) = (a.m.expect("required by clap"), a.n.expect("required by clap"));
    let mesh = schwarz_lantern(m, n)?;
    if a.vertices {
        let mut r = Report::new(
            &["index", "x", "y", "z"],
            json!({
                "m": m,
                "n": n,
                "vertices": mesh.vertices().iter().map(|p| p.to_array()).collect::<Vec<_>>(),
                "triangles": mesh.triangles(),
            }),
        );
        for (i, p) in mesh.vertices().iter().enumerate() {
            r.row(vec![i.into(), p.x.into(), p.y.into(), p.z.into()]);
        }
        return Ok(r);
    }
    let area = mesh_area(&mesh);
    let closed = lantern_area_closed_form(m, n);
    let boundary = boundary_edges(&mesh).len();
    let mut r = Report::new(
        &["m", "n", "vertices", "triangles", "boundary_edges", "mesh_area", "closed_form"],
        json!({
            "m": m,
            "n": n,
            "vertices": mesh.vertices().len(),
            "triangles": mesh.triangles().len(),
            "boundary_edges": boundary,
            "mesh_area": area,
            "closed_form": closed,
        }),
    );
    r.row(vec![
        m.into(),
        n.into(),
        mesh.vertices().len().into(),
        mesh.triangles().len().into(),
        boundary.into(),
        area.into(),
        closed.into(),
    ]);
    Ok(r)
}

fn lantern_sweep(a: &LanternArgs, rule: SweepRule) -> CmdResult {
    if a.m_min < 3 || a.m_max < a.m_min {
        return Err(Failure::Input(format!(
            "sweep needs 3 <= m-min <= m-max, got {}..{}",
            a.m_min, a.m_max
        )));
    }
    let limit = rule.limit();
    let mut rows = Vec::new();
    let mut m = a.m_min;
    while m <= a.m_max {
        let n = rule.n(m);
        let closed = lantern_area_closed_form(m, n);
        let area = if a.mesh_area { Some(lantern_mesh_area(m, n)?) } else { None };
        rows.push((m, n, closed, area));
        m *= 2;
    }
    let limit_json = if limit.is_finite() { json!(limit) } else { json!("inf") };
    let mut r = Report::new(
        &["m", "n", "triangles", "closed_form", "mesh_area", "limit"],
        json!({
            "rule": a.sweep,
            "limit": limit_json,
            "rows": rows.iter().map(|&(m, n, closed, area)| json!({
                "m": m, "n": n, "triangles": 2 * m * n, "closed_form": closed, "mesh_area": area,
            })).collect::<Vec<_>>(),
        }),
    );
    for (m, n, closed, area) in rows {
        r.row(vec![m.into(), n.into(), (2 * m * n).into(), closed.into(), area.into(), limit.into()]);
    }
    Ok(r)
}

fn surface(a: &SurfaceArgs) -> CmdResult {
    let srf = load(&a.def, SurfaceSpec::build)?;
    let est: AreaEstimate = match a.method {
        MethodArg::Borchardt => {
            let mesh = triangulate(&srf, a.grid.unwrap_or(SURFACE_GRID))?;
            let b = borchardt_area(&mesh, a.h, a.samples, a.seed)?;
            let mut r = Report::new(
                &["method", "h", "samples", "seed", "value", "std_error"],
                json!({
                    "method": Method::Borchardt,
                    "value": b.value,
                    "std_error": b.std_error,
                    "h": b.h,
                    "n_samples": b.n_samples,
                    "seed": b.seed,
                    "box_volume": b.box_volume,
                    "hit_fraction": b.hit_fraction,
                }),
            );
            r.row(vec![
                Method::Borchardt.name().into(),
                b.h.into(),
                b.n_samples.into(),
                Cell::Text(b.seed.to_string()),
                b.value.into(),
                b.std_error.into(),
            ]);
            return Ok(r);
        }
        MethodArg::Lagrange => lagrange_area(&srf, a.grid.unwrap_or(256))?,
        MethodArg::Peano => estimate_cells(&srf, CellRule::Bivector, a.max_level, a.tol, a.k)?,
        MethodArg::Geocze => estimate_cells(&srf, CellRule::Geocze, a.max_level, a.tol, a.k)?,
        MethodArg::PeanoGeom => {
            let rule = CellRule::Geometric { n_dirs: a.dirs };
            estimate_cells(&srf, rule, a.max_level, a.tol, a.k)?
        }
    };
    let mut r = Report::new(&["method", "level", "cells", "value", "delta"], &est);
    for h in &est.history {
        r.row(vec![
            est.method.name().into(),
            h.level.into(),
            h.cells.into(),
            h.value.into(),
            h.delta.into(),
        ]);
    }
    Ok(r)
}

fn curve(a: &CurveArgs) -> CmdResult {
    let c = load(&a.def, CurveSpec::build)?;
    let (b, n) = match a.n {
        Some(n) if a.richardson => (curve_bivector_richardson(&c, n)?, n),
        Some(n) => (curve_bivector(&c, n)?, n),
        None => {
            let auto = curve_bivector_auto(&c, a.tol.unwrap_or(1e-10))?;
            (auto.bivector, auto.n)
        }
    };
    let area = enclosed_area(b);
    let mut r = Report::new(
        &["n", "yz", "zx", "xy", "magnitude", "enclosed_area"],
        json!({
            "n": n,
            "richardson": a.richardson,
            "bivector": b.to_array(),
            "magnitude": b.magnitude(),
            "enclosed_area": area,
        }),
    );
    r.row(vec![n.into(), b.yz.into(), b.zx.into(), b.xy.into(), b.magnitude().into(), area.into()]);
    Ok(r)
}

fn polygon(a: &PolygonArgs) -> CmdResult {
    let (poly, normal) = load(&a.points, PolygonSpec::build)?;
    let b = polygon_bivector(&poly);
    let signed = match normal {
        Some(n) => polygon_area_signed(&poly, n)?,
        None => b.magnitude() / 2.0,
    };
    let mut r = Report::new(
        &["yz", "zx", "xy", "magnitude", "signed_area"],
        json!({
            "bivector": b.to_array(),
            "magnitude": b.magnitude(),
            "signed_area": signed,
            "normal": normal.map(|n| n.to_array()),
        }),
    );
    r.row(vec![b.yz.into(), b.zx.into(), b.xy.into(), b.magnitude().into(), signed.into()]);
    Ok(r)
}

fn read_mesh(path: &Path) -> Result<TriMesh, Failure> {
    let text = read_input(path)?;
    let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    let parsed = match ext.as_deref() {
        Some("obj") => parse_obj(&text),
        Some("json") => mesh_from_json(&text),
        _ => {
            return Err(Failure::Input(format!(
                "{}: mesh files must end in .obj or .json",
                path.display()
            )))
        }
    };
    parsed.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn mesh(a: &MeshArgs) -> CmdResult {
    let mesh = read_mesh(&a.file)?;
    let all = !(a.volume || a.euler || a.closed || a.area);
    let mut quantities: Vec<(&str, Cell, serde_json::Value)> = Vec::new();
    quantities.push(("vertices", mesh.vertices().len().into(), json!(mesh.vertices().len())));
    quantities.push(("triangles", mesh.triangles().len().into(), json!(mesh.triangles().len())));
    if all || a.closed {
        let closed = mesh_is_closed(&mesh);
        quantities.push(("closed", closed.into(), json!(closed)));
        let b = boundary_edges(&mesh).len();
        quantities.push(("boundary_edges", b.into(), json!(b)));
    }
    if all || a.euler {
        let chi = euler_characteristic(&mesh);
        quantities.push(("euler", chi.into(), json!(chi)));
    }
    if all || a.area {
        let area = mesh_area(&mesh);
        quantities.push(("area", area.into(), json!(area)));
    }
    if a.volume || (all && mesh_is_closed(&mesh)) {
        let vol = mesh_volume(&mesh, Point3::new(a.at[0], a.at[1], a.at[2]))?;
        quantities.push(("volume", vol.into(), json!(vol)));
    }
    let summary: serde_json::Map<String, serde_json::Value> =
        quantities.iter().map(|(k, _, v)| (k.to_string(), v.clone())).collect();
    let mut r = Report::new(&["quantity", "value"], summary);
    for (k, cell, _) in quantities {
        r.row(vec![k.into(), cell]);
    }
    Ok(r)
}

fn forces(a: &ForcesArgs) -> CmdResult {
    let sys = load(&a.def, ForcesSpec::build)?;
    let p = Point3::new(a.at[0], a.at[1], a.at[2]);
    let (res, couple): (Vector3, _) = forces_reduce(&sys, p);
    let mut r = Report::new(
        &["px", "py", "pz", "rx", "ry", "rz", "myz", "mzx", "mxy"],
        json!({
            "at": a.at,
            "resultant": res.to_array(),
            "couple": couple.to_array(),
        }),
    );
    r.row(vec![
        p.x.into(),
        p.y.into(),
        p.z.into(),
        res.x.into(),
        res.y.into(),
        res.z.into(),
        couple.yz.into(),
        couple.zx.into(),
        couple.xy.into(),
    ]);
    Ok(r)
}

fn sweep(a: &SweepArgs) -> CmdResult {
    let mo = load(&a.def, MotionSpec::build)?;
    let (mode, area) = match a.mode {
        SweepMode::Sweep => ("sweep", sweep_area(&mo, a.n)?),
        SweepMode::Cluster => ("cluster", tangent_cluster_area(&mo, a.n)?),
    };
    let mut r = Report::new(&["mode", "n", "area"], json!({"mode": mode, "n": a.n, "area": area}));
    r.row(vec![mode.into(), a.n.into(), area.into()]);
    Ok(r)
}
