//! Area swept by a moving planar segment, tangent clusters, and the classical
//! special cases (fixed end, tangent segments, segments normal to a curve,
//! the cycloid).

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::curves::{partition, ParamCurve};
use crate::error::{Error, Result};
use crate::exterior::{Point3, Vector3};
use crate::sum::pairwise_sum;

pub const MIN_STEPS: usize = 64;
const PLANAR_TOL: f64 = 1e-12;

/// The segment `A(t) B(t)` for `t` in a shared parameter interval.
///
/// Distinct segments of the motion are assumed not to cross; that is the
/// caller's contract and is not checked.
#[derive(Debug, Clone)]
pub struct SegmentMotion {
    a: ParamCurve,
    b: ParamCurve,
    breakpoints: Vec<f64>,
}

fn num(x: f64) -> String {
    format!("({x:?})")
}

fn dsl(x: &str, y: &str, t0: f64, t1: f64) -> Result<ParamCurve> {
    ParamCurve::dsl([x, y, "0"], t0, t1, vec![], false)
}

impl SegmentMotion {
    pub fn new(a: ParamCurve, b: ParamCurve) -> Result<Self> {
        if a.t_range() != b.t_range() {
            return Err(Error::invalid(format!(
                "A and B must share the parameter interval, got {:?} and {:?}",
                a.t_range(),
                b.t_range()
            )));
        }
        let mut breakpoints: Vec<f64> = a.breakpoints().iter().chain(b.breakpoints()).copied().collect();
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        Ok(SegmentMotion { a, b, breakpoints })
    }

    pub fn a(&self) -> &ParamCurve {
        &self.a
    }

    pub fn b(&self) -> &ParamCurve {
        &self.b
    }

    /// `A` fixed at the origin, `B` on the circle of radius `r` from angle 0 to
    /// `angle`: a circular sector.
    pub fn sector(r: f64, angle: f64) -> Result<Self> {
        let r = num(r);
        Self::new(
            dsl("0", "0", 0.0, angle)?,
            dsl(&format!("{r}*cos(t)"), &format!("{r}*sin(t)"), 0.0, angle)?,
        )
    }

    /// A vertical segment translated sideways: `A(t) = (t, 0)`, `B(t) = (t, len)` for
    /// `t ∈ [0, dist]`.
    pub fn translation(len: f64, dist: f64) -> Result<Self> {
        Self::slanted(len, PI / 2.0, dist)
    }

    /// `A` runs along the x axis and `AB` keeps the angle `angle` with it.
    pub fn slanted(len: f64, angle: f64, dist: f64) -> Result<Self> {
        let (dx, dy) = (num(len * angle.cos()), num(len * angle.sin()));
        Self::new(dsl("t", "0", 0.0, dist)?, dsl(&format!("t + {dx}"), &dy, 0.0, dist)?)
    }

    /// Tangent segments of length `len` to the circle of radius `r`, one full
    /// turn. The swept region is the annulus between `r` and `√(r² + len²)`.
    pub fn circle_tangents(r: f64, len: f64) -> Result<Self> {
        Self::ellipse_tangents(r, r, len)
    }

    /// Tangent segments of length `len` to the ellipse with semi-axes `a`, `b`.
    pub fn ellipse_tangents(a: f64, b: f64, len: f64) -> Result<Self> {
        let (a, b, l) = (num(a), num(b), num(len));
        let speed = format!("sqrt({a}^2*sin(t)^2 + {b}^2*cos(t)^2)");
        Self::new(
            dsl(&format!("{a}*cos(t)"), &format!("{b}*sin(t)"), 0.0, 2.0 * PI)?,
            dsl(
                &format!("{a}*cos(t) - {l}*{a}*sin(t)/{speed}"),
                &format!("{b}*sin(t) + {l}*{b}*cos(t)/{speed}"),
                0.0,
                2.0 * PI,
            )?,
        )
    }

    /// Segments of length `len` normal to the circle of radius `r` at their
    /// midpoints, one full turn.
    pub fn circle_normals(r: f64, len: f64) -> Result<Self> {
        let (lo, hi) = (num(r - len / 2.0), num(r + len / 2.0));
        Self::new(
            dsl(&format!("{lo}*cos(t)"), &format!("{lo}*sin(t)"), 0.0, 2.0 * PI)?,
            dsl(&format!("{hi}*cos(t)"), &format!("{hi}*sin(t)"), 0.0, 2.0 * PI)?,
        )
    }

    /// A circle of radius `r` rolls along the x axis; `A` is the contact point
    /// and `B` the rim point that starts at the origin. `B` traces one cycloid arch.
    pub fn rolling_circle(r: f64) -> Result<Self> {
        let r = num(r);
        Self::new(
            dsl(&format!("{r}*t"), "0", 0.0, 2.0 * PI)?,
            dsl(&format!("{r}*(t - sin(t))"), &format!("{r}*(1 - cos(t))"), 0.0, 2.0 * PI)?,
        )
    }

    fn steps(&self, n: usize) -> Result<Vec<f64>> {
        if n < MIN_STEPS {
            return Err(Error::invalid(format!("need at least {MIN_STEPS} steps, got {n}")));
        }
        let (t0, t1) = self.a.t_range();
        Ok(partition(t0, t1, &self.breakpoints, n))
    }

    /// `(A, B, A′, B′)` at `t`, rejecting points off the plane `z = 0`.
    fn state(&self, t: f64) -> Result<(Point3, Point3, Vector3, Vector3)> {
        let (a, b) = (self.a.eval(t)?, self.b.eval(t)?);
        let (da, db) = (self.a.tangent(t)?, self.b.tangent(t)?);
        for (z, xy) in [(a.z, [a.x, a.y]), (b.z, [b.x, b.y]), (da.z, [da.x, da.y]), (db.z, [db.x, db.y])] {
            let scale = xy[0].abs().max(xy[1].abs()).max(1.0);
            if z.abs() > PLANAR_TOL * scale {
                return Err(Error::invalid(format!(
                    "sweep curves must lie in the plane z = 0 (z = {z} at t = {t})"
                )));
            }
        }
        Ok((a, b, da, db))
    }

    fn integrate(&self, n: usize, f: impl Fn((Point3, Point3, Vector3, Vector3)) -> f64 + Sync) -> Result<f64> {
        let ts = self.steps(n)?;
        let terms: Vec<f64> = ts
            .par_windows(2)
            .map(|w| Ok(f(self.state(0.5 * (w[0] + w[1]))?) * (w[1] - w[0])))
            .collect::<Result<_>>()?;
        Ok(pairwise_sum(&terms))
    }
}

fn det2(v: Vector3, w: Vector3) -> f64 {
    v.x * w.y - v.y * w.x
}

/// Midpoint rule for `½ ∫ |(B − A) ∧ (A′ + B′)| dt`.
pub fn sweep_area(mo: &SegmentMotion, n: usize) -> Result<f64> {
    mo.integrate(n, |(a, b, da, db)| 0.5 * det2(b - a, da + db).abs())
}

/// Midpoint rule for `½ ∫ |det(v, v′)| dt` with `v = B − A`: the area of the
/// segments translated to a common origin.
pub fn tangent_cluster_area(mo: &SegmentMotion, n: usize) -> Result<f64> {
    mo.integrate(n, |(a, b, da, db)| 0.5 * det2(b - a, db - da).abs())
}

/// Area between one cycloid arch of a circle of radius `r` and its base line,
/// swept by the segment from the contact point to the tracing point.
pub fn cycloid_sector_area(r: f64, n: usize) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!("r must be positive, got {r}")));
    }
    sweep_area(&SegmentMotion::rolling_circle(r)?, n)
}
