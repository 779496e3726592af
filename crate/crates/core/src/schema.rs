//! JSON input schemas shared by the library and the command line.
//!
//! ```json
//! {"kind":"dsl","exprs":{"x":"cos(t)","y":"sin(t)","z":"0"},"t0":0,"t1":6.283185307179586,"closed":true}
//! {"kind":"builtin","name":"helix","params":{"r":1,"h":1}}
//! {"kind":"dsl","exprs":{"x":"u","y":"v","z":"u*v"},"domain":{"u":[0,1],"v":[0,1]}}
//! {"kind":"builtin","name":"graph","f":"x*y","domain":{"u":[0,1],"v":[0,1]}}
//! {"A":{curve},"B":{curve}}
//! {"forces":[{"at":[0,0,0],"force":[1,0,0]}]}
//! {"points":[[0,0,0],[1,0,0],[1,1,0]],"normal":[0,0,1]}
//! ```

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::area_est::ParametricSurface;
use crate::curves::ParamCurve;
use crate::error::{Error, Result};
use crate::exterior::{Point3, Vector3};
use crate::polytope::{ForceSystem, Polygon3};
use crate::sweep::SegmentMotion;

/// Deserializes `text`, reporting failures with the JSON path and position.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Schema(format!("at {path}: {inner}"))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Builtin,
    Dsl,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XyzExprs {
    pub x: String,
    pub y: String,
    pub z: String,
}

impl XyzExprs {
    fn as_array(&self) -> [&str; 3] {
        [&self.x, &self.y, &self.z]
    }
}

type Params = BTreeMap<String, f64>;

/// Reads named parameters with defaults, rejecting names not in `known`.
fn params<const N: usize>(what: &str, given: &Params, known: [(&str, f64); N]) -> Result<[f64; N]> {
    if let Some(bad) = given.keys().find(|k| !known.iter().any(|(n, _)| n == k)) {
        let names: Vec<&str> = known.iter().map(|(n, _)| *n).collect();
        return Err(Error::Schema(format!(
            "{what}: unknown parameter {bad:?} (expected one of {names:?})"
        )));
    }
    Ok(known.map(|(n, d)| given.get(n).copied().unwrap_or(d)))
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exprs: Option<XyzExprs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t1: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub breakpoints: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed: Option<bool>,
}

impl CurveSpec {
    /// Builtins: `circle` (radius, cx, cy, cz), `helix` (r, h), `cycloid` (r),
    /// `square` (side), `polyline` (points).
    pub fn build(&self) -> Result<ParamCurve> {
        match self.kind {
            Kind::Builtin => {
                if self.exprs.is_some() || self.t0.is_some() || self.t1.is_some() || !self.breakpoints.is_empty() {
                    return Err(schema("builtin curves take only name, params and points"));
                }
                let name = self.name.as_deref().ok_or_else(|| schema("builtin curve needs a name"))?;
                let p = &self.params;
                if name != "polyline" && self.points.is_some() {
                    return Err(schema("points are only used by the polyline builtin"));
                }
                match name {
                    "circle" => {
                        let [r, cx, cy, cz] =
                            params(name, p, [("radius", 1.0), ("cx", 0.0), ("cy", 0.0), ("cz", 0.0)])?;
                        ParamCurve::circle(Point3::new(cx, cy, cz), r)
                    }
                    "helix" => {
                        let [r, h] = params(name, p, [("r", 1.0), ("h", 1.0)])?;
                        ParamCurve::helix(r, h)
                    }
                    "cycloid" => {
                        let [r] = params(name, p, [("r", 1.0)])?;
                        ParamCurve::cycloid(r)
                    }
                    "square" => {
                        let [side] = params(name, p, [("side", 1.0)])?;
                        ParamCurve::square(side)
                    }
                    "polyline" => {
                        params(name, p, [])?;
                        let pts = self.points.as_ref().ok_or_else(|| schema("polyline needs points"))?;
                        ParamCurve::polyline(pts.iter().map(|&c| Point3::from(c)).collect())
                    }
                    other => Err(schema(format!(
                        "unknown builtin curve {other:?} (circle, helix, cycloid, square, polyline)"
                    ))),
                }
            }
            Kind::Dsl => {
                if self.name.is_some() || !self.params.is_empty() || self.points.is_some() {
                    return Err(schema("dsl curves take exprs, t0, t1, breakpoints and closed"));
                }
                let exprs = self.exprs.as_ref().ok_or_else(|| schema("dsl curve needs exprs"))?;
                let t0 = self.t0.ok_or_else(|| schema("dsl curve needs t0"))?;
                let t1 = self.t1.ok_or_else(|| schema("dsl curve needs t1"))?;
                ParamCurve::dsl(
                    exprs.as_array(),
                    t0,
                    t1,
                    self.breakpoints.clone(),
                    self.closed.unwrap_or(false),
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub u: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta1: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: Params,
    /// Height function in `x`, `y` for the `graph` builtin.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exprs: Option<XyzExprs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSpec>,
}

impl SurfaceSpec {
    /// Builtins: `cylinder` (r, h), `sphere` (r), `octant` (r), `flat`, and
    /// `graph` (`f` over the `domain` rectangle, default the unit square).
    pub fn build(&self) -> Result<ParametricSurface> {
        match self.kind {
            Kind::Builtin => {
                if self.exprs.is_some() {
                    return Err(schema("builtin surfaces take name, params, f and domain"));
                }
                let name = self.name.as_deref().ok_or_else(|| schema("builtin surface needs a name"))?;
                let p = &self.params;
                if name != "graph" && (self.f.is_some() || self.domain.is_some()) {
                    return Err(schema("f and domain are only used by the graph builtin"));
                }
                match name {
                    "cylinder" => {
                        let [r, h] = params(name, p, [("r", 1.0), ("h", 1.0)])?;
                        ParametricSurface::cylinder(r, h)
                    }
                    "sphere" => {
                        let [r] = params(name, p, [("r", 1.0)])?;
                        ParametricSurface::sphere(r)
                    }
                    "octant" => {
                        let [r] = params(name, p, [("r", 1.0)])?;
                        ParametricSurface::sphere_octant(r)
                    }
                    "flat" => {
                        params(name, p, [])?;
                        Ok(ParametricSurface::flat())
                    }
                    "graph" => {
                        params(name, p, [])?;
                        let f = self.f.as_deref().ok_or_else(|| schema("graph needs f"))?;
                        let (x, y) = match &self.domain {
                            None => ([0.0, 1.0], [0.0, 1.0]),
                            Some(DomainSpec { u, v: Some(v), theta0: None, theta1: None }) => (*u, *v),
                            Some(_) => return Err(schema("graph domain must be a rectangle {u, v}")),
                        };
                        ParametricSurface::graph(f, x, y)
                    }
                    other => Err(schema(format!(
                        "unknown builtin surface {other:?} (cylinder, sphere, octant, flat, graph)"
                    ))),
                }
            }
            Kind::Dsl => {
                if self.name.is_some() || !self.params.is_empty() || self.f.is_some() {
                    return Err(schema("dsl surfaces take exprs and domain"));
                }
                let exprs = self.exprs.as_ref().ok_or_else(|| schema("dsl surface needs exprs"))?;
                let d = self.domain.as_ref().ok_or_else(|| schema("dsl surface needs a domain"))?;
                match (&d.v, &d.theta0, &d.theta1) {
                    (Some(v), None, None) => ParametricSurface::rect(exprs.as_array(), d.u, *v),
                    (None, Some(a), Some(b)) => ParametricSurface::region(exprs.as_array(), d.u, a, b),
                    _ => Err(schema("domain needs either v or both theta0 and theta1")),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotionSpec {
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<CurveSpec>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<CurveSpec>,
    /// `sector` (r, angle), `translation` (len, dist), `slanted` (len, angle,
    /// dist), `circle-tangents` (r, len), `ellipse-tangents` (a, b, len),
    /// `circle-normals` (r, len), `rolling-circle` (r).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: Params,
}

impl MotionSpec {
    pub fn build(&self) -> Result<SegmentMotion> {
        match (&self.a, &self.b, &self.builtin) {
            (Some(a), Some(b), None) => {
                if !self.params.is_empty() {
                    return Err(schema("params are only used with a builtin motion"));
                }
                SegmentMotion::new(a.build()?, b.build()?)
            }
            (None, None, Some(name)) => {
                let p = &self.params;
                match name.as_str() {
                    "sector" => {
                        let [r, a] = params(name, p, [("r", 1.0), ("angle", std::f64::consts::FRAC_PI_2)])?;
                        SegmentMotion::sector(r, a)
                    }
                    "translation" => {
                        let [l, d] = params(name, p, [("len", 1.0), ("dist", 1.0)])?;
                        SegmentMotion::translation(l, d)
                    }
                    "slanted" => {
                        let [l, a, d] =
                            params(name, p, [("len", 1.0), ("angle", std::f64::consts::FRAC_PI_4), ("dist", 1.0)])?;
                        SegmentMotion::slanted(l, a, d)
                    }
                    "circle-tangents" => {
                        let [r, l] = params(name, p, [("r", 1.0), ("len", 1.0)])?;
                        SegmentMotion::circle_tangents(r, l)
                    }
                    "ellipse-tangents" => {
                        let [a, b, l] = params(name, p, [("a", 2.0), ("b", 1.0), ("len", 1.0)])?;
                        SegmentMotion::ellipse_tangents(a, b, l)
                    }
                    "circle-normals" => {
                        let [r, l] = params(name, p, [("r", 1.0), ("len", 0.5)])?;
                        SegmentMotion::circle_normals(r, l)
                    }
                    "rolling-circle" => {
                        let [r] = params(name, p, [("r", 1.0)])?;
                        SegmentMotion::rolling_circle(r)
                    }
                    other => Err(schema(format!("unknown builtin motion {other:?}"))),
                }
            }
            _ => Err(schema("a motion needs either both A and B, or a builtin name")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForceSpec {
    pub at: [f64; 3],
    pub force: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcesSpec {
    pub forces: Vec<ForceSpec>,
}

impl ForcesSpec {
    pub fn build(&self) -> Result<ForceSystem> {
        ForceSystem::new(
            self.forces
                .iter()
                .map(|f| (Point3::from(f.at), Vector3::new(f.force[0], f.force[1], f.force[2])))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonSpec {
    pub points: Vec<[f64; 3]>,
    /// Unit normal of the polygon's plane, for the signed area.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal: Option<[f64; 3]>,
}

impl PolygonSpec {
    pub fn build(&self) -> Result<(Polygon3, Option<Vector3>)> {
        let poly = Polygon3::new(self.points.iter().map(|&c| Point3::from(c)).collect())?;
        Ok((poly, self.normal.map(|n| Vector3::new(n[0], n[1], n[2]))))
    }
}
