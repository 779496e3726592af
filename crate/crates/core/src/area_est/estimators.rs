use rayon::prelude::*;
use serde::Serialize;

use super::surface::ParametricSurface;
use crate::error::{Error, Result};
use crate::exterior::{Point3, Vector3};
use crate::polytope::bivector_of_closed_points;
use crate::sum::pairwise_sum;
use crate::winding::{abs_winding_area_of, Point2};

/// Boundary samples per cell edge.
pub const DEFAULT_K: usize = 8;
pub const DEFAULT_TOL: f64 = 1e-3;
pub const DEFAULT_MAX_LEVEL: usize = 7;
pub const DEFAULT_DIRS: usize = 64;
/// Levels below this never stop the refinement.
pub const MIN_LEVEL: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Lagrange,
    Peano,
    Geocze,
    PeanoGeom,
    Borchardt,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Lagrange => "lagrange",
            Method::Peano => "peano",
            Method::Geocze => "geocze",
            Method::PeanoGeom => "peano-geom",
            Method::Borchardt => "borchardt",
        }
    }

    pub fn from_name(s: &str) -> Option<Method> {
        [Method::Lagrange, Method::Peano, Method::Geocze, Method::PeanoGeom, Method::Borchardt]
            .into_iter()
            .find(|m| m.name() == s)
    }
}

/// How a single cell's boundary loop is turned into an area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellRule {
    /// `|b| / 2` for the loop's bi-vector `b`.
    Bivector,
    /// `√(v_xy² + v_yz² + v_zx²)` with `v` the absolute-winding area of the
    /// projection on each coordinate plane.
    Geocze,
    /// Largest absolute-winding area of an orthogonal projection over a
    /// Fibonacci set of directions plus the bi-vector normal, and never below
    /// `|b| / 2`.
    Geometric { n_dirs: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelRecord {
    pub level: usize,
    pub cells: usize,
    pub value: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AreaEstimate {
    pub value: f64,
    pub method: Method,
    pub level: usize,
    pub history: Vec<LevelRecord>,
    pub converged: bool,
}

/// Midpoint rule for `∬ ‖∂P/∂s ∧ ∂P/∂t‖` on a `grid × grid` mesh of the unit
/// square.
pub fn lagrange_area(s: &ParametricSurface, grid: usize) -> Result<AreaEstimate> {
    if grid < 4 {
        return Err(Error::invalid(format!("grid must be at least 4, got {grid}")));
    }
    let h = 1.0 / grid as f64;
    let rows: Vec<f64> = (0..grid)
        .into_par_iter()
        .map(|j| {
            let t = (j as f64 + 0.5) * h;
            let terms: Vec<f64> = (0..grid)
                .map(|i| {
                    let (_, ds, dt) = s.jet((i as f64 + 0.5) * h, t)?;
                    Ok(ds.cross(dt).norm())
                })
                .collect::<Result<_>>()?;
            Ok(pairwise_sum(&terms))
        })
        .collect::<Result<_>>()?;
    let value = pairwise_sum(&rows) * h * h;
    Ok(AreaEstimate {
        value,
        method: Method::Lagrange,
        level: 0,
        history: vec![LevelRecord { level: 0, cells: grid * grid, value, delta: value }],
        converged: true,
    })
}

/// Points along the grid lines of an `nu × nv` decomposition with `k`
/// samples per cell edge.
struct GridLines {
    nu: usize,
    nv: usize,
    k: usize,
    /// `nv + 1` rows of `nu·k + 1` points at `t = j / nv`.
    rows: Vec<Vec<Point3>>,
    /// `nu + 1` columns of `nv·k + 1` points at `s = i / nu`.
    cols: Vec<Vec<Point3>>,
}

impl GridLines {
    fn new(s: &ParametricSurface, nu: usize, nv: usize, k: usize) -> Result<Self> {
        let rows = (0..=nv)
            .into_par_iter()
            .map(|j| {
                let t = j as f64 / nv as f64;
                (0..=nu * k).map(|i| s.point(i as f64 / (nu * k) as f64, t)).collect()
            })
            .collect::<Result<Vec<Vec<Point3>>>>()?;
        let cols = (0..=nu)
            .into_par_iter()
            .map(|i| {
                let u = i as f64 / nu as f64;
                (0..=nv * k).map(|j| s.point(u, j as f64 / (nv * k) as f64)).collect()
            })
            .collect::<Result<Vec<Vec<Point3>>>>()?;
        Ok(GridLines { nu, nv, k, rows, cols })
    }

    /// Counter-clockwise (in parameter space) boundary of cell `(i, j)`.
    fn cell_loop(&self, i: usize, j: usize) -> Vec<Point3> {
        let k = self.k;
        let mut pts = Vec::with_capacity(4 * k);
        pts.extend((0..k).map(|m| self.rows[j][i * k + m]));
        pts.extend((0..k).map(|m| self.cols[i + 1][j * k + m]));
        pts.extend((0..k).map(|m| self.rows[j + 1][(i + 1) * k - m]));
        pts.extend((0..k).map(|m| self.cols[i][(j + 1) * k - m]));
        pts
    }

    /// Boundary of the whole unit square.
    fn outer_loop(&self) -> Vec<Point3> {
        let (nu, nv, k) = (self.nu, self.nv, self.k);
        let mut pts = Vec::with_capacity(2 * k * (nu + nv));
        pts.extend((0..nu * k).map(|m| self.rows[0][m]));
        pts.extend((0..nv * k).map(|m| self.cols[nu][m]));
        pts.extend((0..nu * k).map(|m| self.rows[nv][nu * k - m]));
        pts.extend((0..nv * k).map(|m| self.cols[0][nv * k - m]));
        pts
    }
}

/// Directions spread over the upper hemisphere (a projection along `d` and
/// along `−d` see the same area).
pub fn fibonacci_directions(n: usize) -> Vec<Vector3> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            Vector3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// Orthonormal `(e₁, e₂)` spanning the plane normal to the unit vector `d`.
fn plane_basis(d: Vector3) -> (Vector3, Vector3) {
    let a = d.to_array().map(f64::abs);
    let helper = if a[0] <= a[1] && a[0] <= a[2] {
        Vector3::X
    } else if a[1] <= a[2] {
        Vector3::Y
    } else {
        Vector3::Z
    };
    let e1 = d.cross(helper).normalized().expect("helper not parallel");
    (e1, d.cross(e1))
}

/// Absolute-winding area of the orthogonal projection of a loop along `d`.
pub fn projected_abs_area(pts: &[Point3], d: Vector3) -> f64 {
    let Some(d) = d.normalized() else { return 0.0 };
    let (e1, e2) = plane_basis(d);
    let base = pts[0];
    let flat: Vec<Point2> = pts
        .iter()
        .map(|&p| {
            let v = p - base;
            [v.dot(e1), v.dot(e2)]
        })
        .collect();
    abs_winding_area_of(&flat)
}

/// Absolute-winding areas on the `xy`, `yz` and `zx` planes.
pub fn coordinate_abs_areas(pts: &[Point3]) -> [f64; 3] {
    let proj = |a: usize, b: usize| -> f64 {
        let flat: Vec<Point2> = pts
            .iter()
            .map(|p| {
                let c = (*p - pts[0]).to_array();
                [c[a], c[b]]
            })
            .collect();
        abs_winding_area_of(&flat)
    };
    [proj(0, 1), proj(1, 2), proj(2, 0)]
}

pub fn cell_value(pts: &[Point3], rule: CellRule) -> f64 {
    match rule {
        CellRule::Bivector => 0.5 * bivector_of_closed_points(pts).magnitude(),
        CellRule::Geocze => {
            let [a, b, c] = coordinate_abs_areas(pts);
            (a * a + b * b + c * c).sqrt()
        }
        CellRule::Geometric { n_dirs } => {
            let b = bivector_of_closed_points(pts);
            let floor = 0.5 * b.magnitude();
            let normal = b.normal();
            let own = if floor > 0.0 { projected_abs_area(pts, normal) } else { 0.0 };
            fibonacci_directions(n_dirs)
                .into_iter()
                .map(|d| projected_abs_area(pts, d))
                .fold(own.max(floor), f64::max)
        }
    }
}

/// Per-cell values of an `nu × nv` decomposition, row-major in `t` then `s`.
pub fn cell_values(
    s: &ParametricSurface,
    nu: usize,
    nv: usize,
    k: usize,
    rule: CellRule,
) -> Result<Vec<f64>> {
    check_rule(rule, k)?;
    if nu == 0 || nv == 0 {
        return Err(Error::invalid("cell grid needs at least one cell"));
    }
    let lines = GridLines::new(s, nu, nv, k)?;
    Ok((0..nu * nv)
        .into_par_iter()
        .map(|c| cell_value(&lines.cell_loop(c % nu, c / nu), rule))
        .collect())
}

/// Image of the boundary of the unit square, `n` samples per side.
pub fn outer_boundary(s: &ParametricSurface, n: usize) -> Result<Vec<Point3>> {
    Ok(GridLines::new(s, 1, 1, n.max(1))?.outer_loop())
}

fn check_rule(rule: CellRule, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::invalid("need at least one sample per cell edge"));
    }
    if let CellRule::Geometric { n_dirs } = rule {
        if n_dirs < 16 {
            return Err(Error::invalid(format!("n_dirs must be at least 16, got {n_dirs}")));
        }
    }
    Ok(())
}

/// Dyadic refinement `2^ℓ × 2^ℓ` for `ℓ = 0, 1, …` until the relative
/// increase drops below `tol` (from level 2 on) or `max_level` is reached.
/// The reported value is the largest seen, since every method is a supremum.
pub fn estimate_cells(
    s: &ParametricSurface,
    rule: CellRule,
    max_level: usize,
    tol: f64,
    k: usize,
) -> Result<AreaEstimate> {
    check_rule(rule, k)?;
    if !(tol >= 0.0) {
        return Err(Error::invalid(format!("tol must be non-negative, got {tol}")));
    }
    let method = match rule {
        CellRule::Bivector => Method::Peano,
        CellRule::Geocze => Method::Geocze,
        CellRule::Geometric { .. } => Method::PeanoGeom,
    };
    let mut history: Vec<LevelRecord> = Vec::new();
    let mut converged = false;
    for level in 0..=max_level {
        let n = 1usize << level;
        let value = pairwise_sum(&cell_values(s, n, n, k, rule)?);
        let prev = history.last().map(|r| r.value);
        history.push(LevelRecord {
            level,
            cells: n * n,
            value,
            delta: value - prev.unwrap_or(0.0),
        });
        if let Some(prev) = prev {
            if level >= MIN_LEVEL && value - prev <= tol * prev.abs() {
                converged = true;
                break;
            }
        }
    }
    let value = history.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max);
    let level = history.last().map_or(0, |r| r.level);
    Ok(AreaEstimate { value, method, level, history, converged })
}

pub fn peano_bivector_area(s: &ParametricSurface, max_level: usize, tol: f64) -> Result<AreaEstimate> {
    estimate_cells(s, CellRule::Bivector, max_level, tol, DEFAULT_K)
}

pub fn geocze_area(s: &ParametricSurface, max_level: usize, tol: f64) -> Result<AreaEstimate> {
    estimate_cells(s, CellRule::Geocze, max_level, tol, DEFAULT_K)
}

pub fn peano_geometric_area(
    s: &ParametricSurface,
    max_level: usize,
    n_dirs: usize,
) -> Result<AreaEstimate> {
    estimate_cells(s, CellRule::Geometric { n_dirs }, max_level, DEFAULT_TOL, DEFAULT_K)
}

/// `(|b| / 2) / L` for the image of the square `[s, s+ε] × [t, t+ε]`, with `b`
/// the bi-vector of its boundary and `L` its Lagrange area on a fine grid.
pub fn infinitesimal_ratio(
    srf: &ParametricSurface,
    at: (f64, f64),
    eps: f64,
    k: usize,
    grid: usize,
) -> Result<f64> {
    let patch = srf.restricted([at.0, at.0 + eps], [at.1, at.1 + eps])?;
    let b = cell_values(&patch, 1, 1, k, CellRule::Bivector)?[0];
    Ok(b / lagrange_area(&patch, grid)?.value)
}
