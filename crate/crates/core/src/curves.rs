//! Bi-vectors of closed parametric space curves by chord-polygon sums.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exterior::{project_point, BiVector, Point3, Vector3};
use crate::polytope::bivector_of_closed_points;
use crate::surfdsl::{parse_expr, Dual, Expr};

const CLOSE_TOL: f64 = 1e-12;
const GRAZING_TOL: f64 = 1e-9;
pub const MIN_SEGMENTS: usize = 8;
pub const AUTO_START: usize = 64;
pub const AUTO_LIMIT: usize = 1 << 22;

#[derive(Clone)]
enum Map {
    Circle { center: Point3, radius: f64 },
    Helix { r: f64, h: f64 },
    Cycloid { r: f64 },
    Polyline(Vec<Point3>),
    Dsl([Expr; 3]),
    Projected { inner: Box<ParamCurve>, normal: Vector3, dir: Vector3 },
    Reversed(Box<ParamCurve>),
    Translated(Box<ParamCurve>, Vector3),
}

/// A piecewise-C¹ map `[t₀, t₁] → ℙ₃` with declared breakpoints.
#[derive(Clone)]
pub struct ParamCurve {
    map: Map,
    t0: f64,
    t1: f64,
    breakpoints: Vec<f64>,
    closed: bool,
}

impl fmt::Debug for ParamCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.map {
            Map::Circle { .. } => "circle",
            Map::Helix { .. } => "helix",
            Map::Cycloid { .. } => "cycloid",
            Map::Polyline(_) => "polyline",
            Map::Dsl(_) => "dsl",
            Map::Projected { .. } => "projected",
            Map::Reversed(_) => "reversed",
            Map::Translated(..) => "translated",
        };
        f.debug_struct("ParamCurve")
            .field("kind", &kind)
            .field("t0", &self.t0)
            .field("t1", &self.t1)
            .field("breakpoints", &self.breakpoints)
            .field("closed", &self.closed)
            .finish()
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

impl ParamCurve {
    /// Circle of the given radius in the plane `z = center.z`, counter-clockwise, `t ∈ [0, 2π]`.
    pub fn circle(center: Point3, radius: f64) -> Result<Self> {
        positive("radius", radius)?;
        Ok(ParamCurve {
            map: Map::Circle { center, radius },
            t0: 0.0,
            t1: 2.0 * PI,
            breakpoints: Vec::new(),
            closed: true,
        })
    }

    pub fn unit_circle() -> Self {
        Self::circle(Point3::ORIGIN, 1.0).expect("valid")
    }

    /// Helix of radius `r` and pitch `2πh` closed by a horizontal return to the
    /// axis at the top, a vertical drop along the axis and a horizontal run back
    /// out to `(r, 0, 0)`. `t ∈ [−r, 2π + r + 2πh]`.
    pub fn helix(r: f64, h: f64) -> Result<Self> {
        positive("r", r)?;
        positive("h", h)?;
        Ok(ParamCurve {
            map: Map::Helix { r, h },
            t0: -r,
            t1: 2.0 * PI + r + 2.0 * PI * h,
            breakpoints: vec![0.0, 2.0 * PI, 2.0 * PI + r],
            closed: true,
        })
    }

    /// One cycloid arch over `[0, 2π]` closed by the segment back along the base
    /// line over `[2π, 4π]`. Clockwise, enclosing `3πr²`.
    pub fn cycloid(r: f64) -> Result<Self> {
        positive("r", r)?;
        Ok(ParamCurve {
            map: Map::Cycloid { r },
            t0: 0.0,
            t1: 4.0 * PI,
            breakpoints: vec![2.0 * PI],
            closed: true,
        })
    }

    /// Closed polygon through `pts`, vertex `i` at `t = i`, `t ∈ [0, len]`.
    pub fn polyline(pts: Vec<Point3>) -> Result<Self> {
        if pts.len() < 2 {
            return Err(Error::invalid("a polyline curve needs at least 2 vertices"));
        }
        if pts.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("polyline vertex is not finite"));
        }
        let k = pts.len();
        Ok(ParamCurve {
            map: Map::Polyline(pts),
            t0: 0.0,
            t1: k as f64,
            breakpoints: (1..k).map(|i| i as f64).collect(),
            closed: true,
        })
    }

    /// Counter-clockwise axis-aligned square `[0, side]²` in `z = 0`.
    pub fn square(side: f64) -> Result<Self> {
        positive("side", side)?;
        Self::polyline(vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(side, 0.0, 0.0),
            Point3::new(side, side, 0.0),
            Point3::new(0.0, side, 0.0),
        ])
    }

    /// Curve given by three expressions in `t`.
    ///
    /// When `closed` is set the endpoints must agree to `1e-12` of the sampled
    /// coordinate scale.
    pub fn dsl(
        exprs: [&str; 3],
        t0: f64,
        t1: f64,
        breakpoints: Vec<f64>,
        closed: bool,
    ) -> Result<Self> {
        if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
            return Err(Error::invalid(format!("need finite t0 < t1, got [{t0}, {t1}]")));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1]))
            || breakpoints.iter().any(|&b| !(b > t0 && b < t1))
        {
            return Err(Error::invalid("breakpoints must be strictly increasing inside (t0, t1)"));
        }
        let parse = |s: &str| parse_expr(s, &["t"]);
        let map = Map::Dsl([parse(exprs[0])?, parse(exprs[1])?, parse(exprs[2])?]);
        let curve = ParamCurve { map, t0, t1, breakpoints, closed };
        if closed {
            curve.check_closed()?;
        }
        Ok(curve)
    }

    fn check_closed(&self) -> Result<()> {
        let samples: Vec<Point3> = (0..=16)
            .map(|k| self.eval(self.t0 + (self.t1 - self.t0) * k as f64 / 16.0))
            .collect::<Result<_>>()?;
        let scale = samples
            .iter()
            .flat_map(|p| p.to_array())
            .fold(0.0_f64, |m, c| m.max(c.abs()));
        if samples[0].distance(samples[16]) > CLOSE_TOL * scale {
            return Err(Error::OpenCurve);
        }
        Ok(())
    }

    pub fn t_range(&self) -> (f64, f64) {
        (self.t0, self.t1)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn eval(&self, t: f64) -> Result<Point3> {
        let p = match &self.map {
            Map::Circle { center, radius } => {
                *center + Vector3::new(radius * t.cos(), radius * t.sin(), 0.0)
            }
            &Map::Helix { r, h } => helix_point(r, h, t),
            &Map::Cycloid { r } => {
                if t <= 2.0 * PI {
                    Point3::new(r * (t - t.sin()), r * (1.0 - t.cos()), 0.0)
                } else {
                    Point3::new(r * (4.0 * PI - t), 0.0, 0.0)
                }
            }
            Map::Polyline(pts) => {
                let k = pts.len();
                let i = (t.floor().max(0.0) as usize).min(k - 1);
                let s = t - i as f64;
                let (a, b) = (pts[i], pts[(i + 1) % k]);
                a + (b - a) * s
            }
            Map::Dsl(e) => Point3::new(e[0].eval(&[t])?, e[1].eval(&[t])?, e[2].eval(&[t])?),
            Map::Projected { inner, normal, dir } => project_point(inner.eval(t)?, *normal, *dir),
            Map::Reversed(inner) => inner.eval(self.t0 + self.t1 - t)?,
            Map::Translated(inner, v) => inner.eval(t)? + *v,
        };
        Ok(p)
    }

    /// `γ′(t)`; at a breakpoint the left-hand piece decides.
    pub fn tangent(&self, t: f64) -> Result<Vector3> {
        let v = match &self.map {
            Map::Circle { radius, .. } => Vector3::new(-radius * t.sin(), radius * t.cos(), 0.0),
            &Map::Helix { r, h } => {
                if t <= 0.0 {
                    Vector3::X
                } else if t <= 2.0 * PI {
                    Vector3::new(-r * t.sin(), r * t.cos(), h)
                } else if t <= 2.0 * PI + r {
                    -Vector3::X
                } else {
                    -Vector3::Z
                }
            }
            &Map::Cycloid { r } => {
                if t <= 2.0 * PI {
                    Vector3::new(r * (1.0 - t.cos()), r * t.sin(), 0.0)
                } else {
                    Vector3::new(-r, 0.0, 0.0)
                }
            }
            Map::Polyline(pts) => {
                let k = pts.len();
                let i = (t.floor().max(0.0) as usize).min(k - 1);
                pts[(i + 1) % k] - pts[i]
            }
            Map::Dsl(e) => {
                let env = [Dual::<1>::variable(t, 0)];
                let d = |x: &Expr| x.eval_dual(&env).map(|v| v.partials[0]);
                Vector3::new(d(&e[0])?, d(&e[1])?, d(&e[2])?)
            }
            Map::Projected { inner, normal, dir } => {
                let v = inner.tangent(t)?;
                v - *dir * (v.dot(*normal) / dir.dot(*normal))
            }
            Map::Reversed(inner) => -inner.tangent(self.t0 + self.t1 - t)?,
            Map::Translated(inner, _) => inner.tangent(t)?,
        };
        Ok(v)
    }

    /// Same trace traversed backwards.
    pub fn reversed(&self) -> ParamCurve {
        let (t0, t1) = (self.t0, self.t1);
        let mut breakpoints: Vec<f64> = self.breakpoints.iter().map(|&b| t0 + t1 - b).collect();
        breakpoints.reverse();
        ParamCurve {
            map: Map::Reversed(Box::new(self.clone())),
            t0,
            t1,
            breakpoints,
            closed: self.closed,
        }
    }

    pub fn translated(&self, v: Vector3) -> ParamCurve {
        ParamCurve {
            map: Map::Translated(Box::new(self.clone()), v),
            t0: self.t0,
            t1: self.t1,
            breakpoints: self.breakpoints.clone(),
            closed: self.closed,
        }
    }

    /// Segment-end parameters: every piece between breakpoints gets a uniform
    /// partition, with `n` split among pieces by parameter length (at least one
    /// segment each).
    pub fn partition(&self, n: usize) -> Vec<f64> {
        partition(self.t0, self.t1, &self.breakpoints, n)
    }
}

/// Piecewise-uniform partition of `[t0, t1]` containing every breakpoint.
pub(crate) fn partition(t0: f64, t1: f64, breakpoints: &[f64], n: usize) -> Vec<f64> {
    let mut cuts = vec![t0];
    cuts.extend_from_slice(breakpoints);
    cuts.push(t1);
    let lens: Vec<f64> = cuts.windows(2).map(|w| w[1] - w[0]).collect();
    let counts = allocate(n, &lens);
    let mut ts = Vec::with_capacity(counts.iter().sum::<usize>() + 1);
    for (w, &m) in cuts.windows(2).zip(&counts) {
        let (a, b) = (w[0], w[1]);
        for k in 0..m {
            ts.push(a + (b - a) * (k as f64 / m as f64));
        }
    }
    ts.push(t1);
    ts
}

fn helix_point(r: f64, h: f64, t: f64) -> Point3 {
    let top = 2.0 * PI * h;
    if t <= 0.0 {
        Point3::new(r + t, 0.0, 0.0)
    } else if t <= 2.0 * PI {
        Point3::new(r * t.cos(), r * t.sin(), h * t)
    } else if t <= 2.0 * PI + r {
        Point3::new(2.0 * PI + r - t, 0.0, top)
    } else {
        Point3::new(0.0, 0.0, top + 2.0 * PI + r - t)
    }
}

/// Largest-remainder split of `n` proportional to `weights`, at least 1 each.
fn allocate(n: usize, weights: &[f64]) -> Vec<usize> {
    let total: f64 = weights.iter().sum();
    let quotas: Vec<f64> = weights.iter().map(|w| n as f64 * w / total).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| (q.floor() as usize).max(1)).collect();
    let used: usize = counts.iter().sum();
    if used < n {
        let mut order: Vec<usize> = (0..weights.len()).collect();
        order.sort_by(|&a, &b| {
            let ra = quotas[a] - quotas[a].floor();
            let rb = quotas[b] - quotas[b].floor();
            rb.total_cmp(&ra).then(a.cmp(&b))
        });
        for &i in order.iter().cycle().take(n - used) {
            counts[i] += 1;
        }
    }
    counts
}

/// Chord-polygon sum `Σ γ(tᵢ) γ(tᵢ₊₁)` over [`ParamCurve::partition`].
///
/// Magnitude is twice the enclosed area for a simple planar curve.
pub fn curve_bivector(curve: &ParamCurve, n: usize) -> Result<BiVector> {
    if !curve.closed {
        return Err(Error::OpenCurve);
    }
    if n < MIN_SEGMENTS {
        return Err(Error::invalid(format!("need at least {MIN_SEGMENTS} segments, got {n}")));
    }
    let ts = curve.partition(n);
    // the closing point is the first one, so the loop is exactly closed
    let pts: Vec<Point3> = ts[..ts.len() - 1]
        .par_iter()
        .map(|&t| curve.eval(t))
        .collect::<Result<_>>()?;
    Ok(bivector_of_closed_points(&pts))
}

/// One Richardson step on the second-order chord sums at `n` and `2n`.
pub fn curve_bivector_richardson(curve: &ParamCurve, n: usize) -> Result<BiVector> {
    let coarse = curve_bivector(curve, n)?;
    let fine = curve_bivector(curve, 2 * n)?;
    Ok((fine * 4.0 - coarse) * (1.0 / 3.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AutoBivector {
    pub bivector: BiVector,
    pub n: usize,
}

/// Doubles `n` from 64 until two successive sums agree to `tol` relative to
/// their magnitude (absolute when the magnitude is below `tol`).
pub fn curve_bivector_auto(curve: &ParamCurve, tol: f64) -> Result<AutoBivector> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::invalid(format!("tol must be positive, got {tol}")));
    }
    let mut n = AUTO_START;
    let mut prev = curve_bivector(curve, n)?;
    let mut last_delta = f64::INFINITY;
    while n < AUTO_LIMIT {
        n *= 2;
        let next = curve_bivector(curve, n)?;
        let mag = next.magnitude();
        let bound = if mag < tol { tol } else { tol * mag };
        let dmag = (mag - prev.magnitude()).abs();
        let dcomp = next.max_abs_diff(prev);
        last_delta = dmag.max(dcomp);
        if dmag <= bound && dcomp <= bound {
            return Ok(AutoBivector { bivector: next, n });
        }
        prev = next;
    }
    Err(Error::NotConverged { last_n: n, last_delta })
}

/// Area enclosed by a simple planar closed curve, `|b| / 2`.
pub fn enclosed_area(b: BiVector) -> f64 {
    0.5 * b.magnitude()
}

/// Parallel projection along `dir` onto the plane through the origin with
/// normal `plane_normal`.
pub fn project_curve(curve: &ParamCurve, plane_normal: Vector3, dir: Vector3) -> Result<ParamCurve> {
    let (nl, dl) = (plane_normal.norm(), dir.norm());
    if !(nl > 0.0 && dl > 0.0) || !(plane_normal.is_finite() && dir.is_finite()) {
        return Err(Error::invalid("projection needs non-zero finite normal and direction"));
    }
    if (plane_normal.dot(dir) / (nl * dl)).abs() <= GRAZING_TOL {
        return Err(Error::GrazingDirection);
    }
    Ok(ParamCurve {
        map: Map::Projected { inner: Box::new(curve.clone()), normal: plane_normal, dir },
        t0: curve.t0,
        t1: curve.t1,
        breakpoints: curve.breakpoints.clone(),
        closed: curve.closed,
    })
}
