use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::exterior::{Point3, Vector3};
use crate::surfdsl::{parse_expr, Dual, Expr};

const REGION_SAMPLES: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Rect { u: [f64; 2], v: [f64; 2] },
    /// `{ u₀ < u < u₁, θ₀(u) < v < θ₁(u) }`, `θ` expressions in `u`.
    Region { u: [f64; 2], theta0: Expr, theta1: Expr },
}

/// A map `(u, v) → ℙ₃` given by three expressions, read through the unit
/// square: `u = u₀ + s (u₁ − u₀)` and `v = v₀ + t (v₁ − v₀)` on rectangles,
/// `v = θ₀(u) + t (θ₁(u) − θ₀(u))` on regions.
///
/// `window` restricts the unit square to `[s₀, s₁] × [t₀, t₁]`, so every
/// estimator sees the restricted patch as its own unit square.
#[derive(Debug, Clone, PartialEq)]
pub struct ParametricSurface {
    map: [Expr; 3],
    domain: Domain,
    window: [f64; 4],
}

fn interval(name: &str, r: [f64; 2]) -> Result<()> {
    if r[0].is_finite() && r[1].is_finite() && r[0] < r[1] {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} range must be finite and increasing, got {r:?}")))
    }
}

fn num(x: f64) -> String {
    format!("({x:?})")
}

impl ParametricSurface {
    /// Expressions in `u` and `v` over a rectangle.
    pub fn rect(exprs: [&str; 3], u: [f64; 2], v: [f64; 2]) -> Result<Self> {
        interval("u", u)?;
        interval("v", v)?;
        Self::from_parts(exprs, Domain::Rect { u, v })
    }

    /// Expressions in `u` and `v` over `θ₀(u) < v < θ₁(u)`; `θ₀ < θ₁` is
    /// checked at 1024 sample points.
    pub fn region(exprs: [&str; 3], u: [f64; 2], theta0: &str, theta1: &str) -> Result<Self> {
        interval("u", u)?;
        let theta0 = parse_expr(theta0, &["u"])?;
        let theta1 = parse_expr(theta1, &["u"])?;
        for i in 0..REGION_SAMPLES {
            let x = u[0] + (u[1] - u[0]) * (i as f64 + 0.5) / REGION_SAMPLES as f64;
            let (a, b) = (theta0.eval(&[x])?, theta1.eval(&[x])?);
            if !(a < b) {
                return Err(Error::invalid(format!(
                    "theta0 < theta1 fails at u = {x}: {a} vs {b}"
                )));
            }
        }
        Self::from_parts(exprs, Domain::Region { u, theta0, theta1 })
    }

    fn from_parts(exprs: [&str; 3], domain: Domain) -> Result<Self> {
        let vars = ["u", "v"];
        let map = [
            parse_expr(exprs[0], &vars)?,
            parse_expr(exprs[1], &vars)?,
            parse_expr(exprs[2], &vars)?,
        ];
        Ok(ParametricSurface { map, domain, window: [0.0, 1.0, 0.0, 1.0] })
    }

    /// Lateral surface of the cylinder `x² + y² = r²`, `0 ≤ z ≤ h`.
    pub fn cylinder(r: f64, h: f64) -> Result<Self> {
        positive("r", r)?;
        positive("h", h)?;
        let (x, y) = (format!("{}*cos(u)", num(r)), format!("{}*sin(u)", num(r)));
        Self::rect([&x, &y, "v"], [0.0, 2.0 * PI], [0.0, h])
    }

    /// Sphere of radius `r`, `u` longitude and `v` colatitude.
    pub fn sphere(r: f64) -> Result<Self> {
        Self::sphere_patch(r, [0.0, 2.0 * PI], [0.0, PI])
    }

    /// The part of the sphere in the positive octant.
    pub fn sphere_octant(r: f64) -> Result<Self> {
        Self::sphere_patch(r, [0.0, FRAC_PI_2], [0.0, FRAC_PI_2])
    }

    fn sphere_patch(r: f64, u: [f64; 2], v: [f64; 2]) -> Result<Self> {
        positive("r", r)?;
        let r = num(r);
        Self::rect(
            [
                &format!("{r}*sin(v)*cos(u)"),
                &format!("{r}*sin(v)*sin(u)"),
                &format!("{r}*cos(v)"),
            ],
            u,
            v,
        )
    }

    /// Graph `z = f(x, y)` over a rectangle; `f` is written in `x` and `y`.
    pub fn graph(f: &str, x: [f64; 2], y: [f64; 2]) -> Result<Self> {
        interval("x", x)?;
        interval("y", y)?;
        let vars = ["u", "v"];
        let map = [
            parse_expr("u", &vars)?,
            parse_expr("v", &vars)?,
            // positional variables, so x and y read as u and v
            parse_expr(f, &["x", "y"])?,
        ];
        Ok(ParametricSurface { map, domain: Domain::Rect { u: x, v: y }, window: [0.0, 1.0, 0.0, 1.0] })
    }

    /// The unit square in the plane `z = 0`.
    pub fn flat() -> Self {
        Self::graph("0", [0.0, 1.0], [0.0, 1.0]).expect("valid")
    }

    pub fn exprs(&self) -> &[Expr; 3] {
        &self.map
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn window(&self) -> [f64; 4] {
        self.window
    }

    /// Restriction to `[s₀, s₁] × [t₀, t₁]` of the current unit square.
    pub fn restricted(&self, s: [f64; 2], t: [f64; 2]) -> Result<Self> {
        if !(0.0 <= s[0] && s[0] < s[1] && s[1] <= 1.0 && 0.0 <= t[0] && t[0] < t[1] && t[1] <= 1.0)
        {
            return Err(Error::invalid(format!("window {s:?} x {t:?} not inside the unit square")));
        }
        let [a, b, c, d] = self.window;
        let mut out = self.clone();
        out.window = [a + s[0] * (b - a), a + s[1] * (b - a), c + t[0] * (d - c), c + t[1] * (d - c)];
        Ok(out)
    }

    /// The two halves `s < ½` and `s > ½`.
    pub fn split_s(&self) -> Result<(Self, Self)> {
        Ok((self.restricted([0.0, 0.5], [0.0, 1.0])?, self.restricted([0.5, 1.0], [0.0, 1.0])?))
    }

    fn uv_dual(&self, s: f64, t: f64) -> Result<[Dual<2>; 2]> {
        let [a, b, c, d] = self.window;
        let s = Dual::new(a + s * (b - a), [b - a, 0.0]);
        let t = Dual::new(c + t * (d - c), [0.0, d - c]);
        let (u, v) = match &self.domain {
            Domain::Rect { u, v } => {
                (Dual::constant(u[0]) + s * (u[1] - u[0]), Dual::constant(v[0]) + t * (v[1] - v[0]))
            }
            Domain::Region { u, theta0, theta1 } => {
                let uu = Dual::constant(u[0]) + s * (u[1] - u[0]);
                let lo = theta0.eval_dual(&[uu])?;
                let hi = theta1.eval_dual(&[uu])?;
                (uu, lo + t * (hi - lo))
            }
        };
        Ok([u, v])
    }

    fn uv(&self, s: f64, t: f64) -> Result<[f64; 2]> {
        let [a, b, c, d] = self.window;
        let (s, t) = (a + s * (b - a), c + t * (d - c));
        Ok(match &self.domain {
            Domain::Rect { u, v } => [u[0] + s * (u[1] - u[0]), v[0] + t * (v[1] - v[0])],
            Domain::Region { u, theta0, theta1 } => {
                let uu = u[0] + s * (u[1] - u[0]);
                let (lo, hi) = (theta0.eval(&[uu])?, theta1.eval(&[uu])?);
                [uu, lo + t * (hi - lo)]
            }
        })
    }

    /// Point at unit-square coordinates `(s, t)`.
    pub fn point(&self, s: f64, t: f64) -> Result<Point3> {
        let uv = self.uv(s, t)?;
        Ok(Point3::new(self.map[0].eval(&uv)?, self.map[1].eval(&uv)?, self.map[2].eval(&uv)?))
    }

    /// Point and the partials `∂/∂s`, `∂/∂t` at unit-square coordinates.
    pub fn jet(&self, s: f64, t: f64) -> Result<(Point3, Vector3, Vector3)> {
        let uv = self.uv_dual(s, t)?;
        let x = self.map[0].eval_dual(&uv)?;
        let y = self.map[1].eval_dual(&uv)?;
        let z = self.map[2].eval_dual(&uv)?;
        Ok((
            Point3::new(x.value, y.value, z.value),
            Vector3::new(x.partials[0], y.partials[0], z.partials[0]),
            Vector3::new(x.partials[1], y.partials[1], z.partials[1]),
        ))
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_land_where_expected() {
        let c = ParametricSurface::cylinder(2.0, 3.0).unwrap();
        let p = c.point(0.25, 0.5).unwrap();
        assert!(p.distance(Point3::new(0.0, 2.0, 1.5)) < 1e-15);
        let s = ParametricSurface::sphere(1.5).unwrap();
        for (a, b) in [(0.1, 0.2), (0.7, 0.9), (0.5, 0.5)] {
            assert!((s.point(a, b).unwrap().coords().norm() - 1.5).abs() < 1e-15);
        }
        let g = ParametricSurface::graph("x*y", [0.0, 2.0], [1.0, 3.0]).unwrap();
        assert_eq!(g.point(0.5, 0.5).unwrap(), Point3::new(1.0, 2.0, 2.0));
    }

    #[test]
    fn jet_matches_finite_differences() {
        let surfaces = [
            ParametricSurface::cylinder(1.0, 1.0).unwrap(),
            ParametricSurface::sphere_octant(2.0).unwrap(),
            ParametricSurface::graph("sin(x)*exp(y)", [0.0, 1.0], [0.0, 2.0]).unwrap(),
            ParametricSurface::region(["u", "v", "u*v"], [0.0, 1.0], "u*u - 1", "1 + u").unwrap(),
            ParametricSurface::sphere(1.0).unwrap().restricted([0.2, 0.4], [0.5, 0.75]).unwrap(),
        ];
        let h = 1e-6;
        for srf in &surfaces {
            for (s, t) in [(0.3, 0.6), (0.71, 0.2)] {
                let (_, ds, dt) = srf.jet(s, t).unwrap();
                let fs = (srf.point(s + h, t).unwrap() - srf.point(s - h, t).unwrap()) * (0.5 / h);
                let ft = (srf.point(s, t + h).unwrap() - srf.point(s, t - h).unwrap()) * (0.5 / h);
                assert!((ds - fs).norm() < 1e-6 && (dt - ft).norm() < 1e-6, "{srf:?}");
            }
        }
    }

    #[test]
    fn region_must_be_ordered() {
        assert!(ParametricSurface::region(["u", "v", "0"], [0.0, 1.0], "u", "0.5").is_err());
        assert!(ParametricSurface::region(["u", "v", "0"], [0.0, 1.0], "0", "1 + u").is_ok());
    }

    #[test]
    fn window_composes() {
        let g = ParametricSurface::flat();
        let w = g.restricted([0.5, 1.0], [0.0, 0.5]).unwrap().restricted([0.0, 0.5], [0.5, 1.0]).unwrap();
        assert_eq!(w.window(), [0.5, 0.75, 0.25, 0.5]);
        assert_eq!(w.point(0.0, 0.0).unwrap(), Point3::new(0.5, 0.25, 0.0));
        assert!(g.restricted([0.5, 0.4], [0.0, 1.0]).is_err());
    }
}
