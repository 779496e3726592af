//! Winding numbers of closed planar polylines and the absolute-winding area
//! `∫ |O(P, γ)| dA`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::sampling::{sample_chunks, Moments};
use crate::sum::pairwise_sum;

pub type Point2 = [f64; 2];

const ON_CURVE_TOL: f64 = 1e-12;
const MERGE_TOL: f64 = 1e-12;
const DISTINCT_TOL: f64 = 1e-12;

/// Closed planar polygonal curve (the last vertex joins the first).
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarPolyline {
    vertices: Vec<Point2>,
}

impl PlanarPolyline {
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::invalid(format!(
                "a closed polyline needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::invalid("polyline vertex is not finite"));
        }
        let scale = diagonal(&vertices).max(f64::MIN_POSITIVE);
        let n = vertices.len();
        for i in 0..n {
            let j = (i + 1) % n;
            if dist(vertices[i], vertices[j]) <= DISTINCT_TOL * scale {
                return Err(Error::invalid(format!("consecutive vertices {i} and {j} coincide")));
            }
        }
        Ok(PlanarPolyline { vertices })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// `(min, max)` corners.
    pub fn bbox(&self) -> (Point2, Point2) {
        bbox(&self.vertices)
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        PlanarPolyline { vertices: v }
    }

    pub fn map(&self, f: impl Fn(Point2) -> Point2) -> Result<Self> {
        PlanarPolyline::new(self.vertices.iter().map(|&p| f(p)).collect())
    }
}

fn dist(a: Point2, b: Point2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn sub(a: Point2, b: Point2) -> Point2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: Point2, b: Point2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: Point2, b: Point2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn bbox(pts: &[Point2]) -> (Point2, Point2) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (lo, hi)
}

fn diagonal(pts: &[Point2]) -> f64 {
    let (lo, hi) = bbox(pts);
    dist(lo, hi)
}

fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = sub(b, a);
    let len2 = dot(ab, ab);
    let t = if len2 > 0.0 { (dot(sub(p, a), ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    dist(p, [a[0] + t * ab[0], a[1] + t * ab[1]])
}

/// Signed crossing count of the rays from `p` towards `+x`.
pub fn winding_number(p: Point2, poly: &PlanarPolyline) -> Result<i64> {
    let scale = diagonal(&poly.vertices);
    let tol = ON_CURVE_TOL * scale;
    if poly.segments().any(|(a, b)| point_segment_distance(p, a, b) <= tol) {
        return Err(Error::IndexUndefined);
    }
    Ok(crossing_count(p, &poly.vertices))
}

fn crossing_count(p: Point2, pts: &[Point2]) -> i64 {
    let n = pts.len();
    let mut w = 0;
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        let side = cross(sub(b, a), sub(p, a));
        if a[1] <= p[1] {
            if b[1] > p[1] && side > 0.0 {
                w += 1;
            }
        } else if b[1] <= p[1] && side < 0.0 {
            w -= 1;
        }
    }
    w
}

/// Shoelace area, positive for counter-clockwise loops.
pub fn signed_area(poly: &PlanarPolyline) -> f64 {
    signed_area_of(&poly.vertices)
}

/// [`signed_area`] on a raw closed vertex loop.
pub fn signed_area_of(pts: &[Point2]) -> f64 {
    let n = pts.len();
    if n < 3 {
        return 0.0;
    }
    let base = pts[0];
    let terms: Vec<f64> = (1..n - 1)
        .map(|i| cross(sub(pts[i], base), sub(pts[i + 1], base)))
        .collect();
    0.5 * pairwise_sum(&terms)
}

/// Exact `∫ |O(P, γ)| dA` by vertical slab decomposition.
pub fn abs_winding_area(poly: &PlanarPolyline) -> f64 {
    abs_winding_area_of(&poly.vertices)
}

/// [`abs_winding_area`] on a raw closed loop. Zero-length segments are
/// dropped, so projections that collapse edges are fine.
pub fn abs_winding_area_of(pts: &[Point2]) -> f64 {
    let diag = diagonal(pts);
    if pts.len() < 3 || !(diag > 0.0) {
        return 0.0;
    }
    let eps = MERGE_TOL * diag;
    let n = pts.len();
    let segs: Vec<(Point2, Point2)> = (0..n)
        .map(|i| (pts[i], pts[(i + 1) % n]))
        .filter(|&(a, b)| dist(a, b) > 0.0)
        .collect();

    let mut xs: Vec<f64> = segs.iter().map(|s| s.0[0]).collect();
    let mut simple = true;
    let m = segs.len();
    for i in 0..m {
        for j in i + 1..m {
            let adjacent = j == i + 1 || (i == 0 && j == m - 1);
            match intersect(segs[i], segs[j], eps) {
                Meet::None => {}
                Meet::At(x) => {
                    xs.push(x);
                    if !adjacent || !shares_endpoint_only(segs[i], segs[j], eps) {
                        simple = false;
                    }
                }
                Meet::Overlap => simple = false,
            }
        }
    }
    if simple {
        return signed_area_of(pts).abs();
    }

    xs.sort_by(f64::total_cmp);
    let mut events: Vec<f64> = Vec::with_capacity(xs.len());
    for x in xs {
        if events.last().is_none_or(|&l| x - l > eps) {
            events.push(x);
        }
    }
    let slabs: Vec<f64> = events
        .windows(2)
        .map(|w| slab_area(&segs, w[0], w[1]))
        .collect();
    pairwise_sum(&slabs)
}

enum Meet {
    None,
    At(f64),
    Overlap,
}

fn intersect((p, p2): (Point2, Point2), (q, q2): (Point2, Point2), eps: f64) -> Meet {
    let r = sub(p2, p);
    let s = sub(q2, q);
    let denom = cross(r, s);
    let qp = sub(q, p);
    let (lr, ls) = (dot(r, r).sqrt(), dot(s, s).sqrt());
    if denom.abs() <= 1e-14 * lr * ls {
        // parallel: only collinear overlaps matter
        if cross(qp, r).abs() > eps * lr {
            return Meet::None;
        }
        let t0 = dot(qp, r) / (lr * lr);
        let t1 = dot(sub(q2, p), r) / (lr * lr);
        let (lo, hi) = (t0.min(t1), t0.max(t1));
        let slack = eps / lr;
        if hi < -slack || lo > 1.0 + slack {
            return Meet::None;
        }
        if hi.min(1.0) - lo.max(0.0) > slack {
            return Meet::Overlap;
        }
        // touching end to end
        let t = lo.clamp(0.0, 1.0);
        return Meet::At(p[0] + t * r[0]);
    }
    let t = cross(qp, s) / denom;
    let u = cross(qp, r) / denom;
    let (st, su) = (eps / lr, eps / ls);
    if t < -st || t > 1.0 + st || u < -su || u > 1.0 + su {
        return Meet::None;
    }
    Meet::At(p[0] + t.clamp(0.0, 1.0) * r[0])
}

fn shares_endpoint_only(a: (Point2, Point2), b: (Point2, Point2), eps: f64) -> bool {
    dist(a.1, b.0) <= eps || dist(b.1, a.0) <= eps
}

fn y_at((a, b): (Point2, Point2), x: f64) -> f64 {
    let t = ((x - a[0]) / (b[0] - a[0])).clamp(0.0, 1.0);
    a[1] + t * (b[1] - a[1])
}

fn slab_area(segs: &[(Point2, Point2)], xl: f64, xr: f64) -> f64 {
    let xm = 0.5 * (xl + xr);
    // (mid height, left y, right y, winding step when crossed downward)
    let mut cut: Vec<(f64, f64, f64, i64)> = segs
        .iter()
        .filter(|(a, b)| a[0].min(b[0]) < xm && a[0].max(b[0]) > xm)
        .map(|&s| {
            let (yl, yr) = (y_at(s, xl), y_at(s, xr));
            let step = if s.1[0] < s.0[0] { 1 } else { -1 };
            (0.5 * (yl + yr), yl, yr, step)
        })
        .collect();
    cut.sort_by(|a, b| b.0.total_cmp(&a.0));
    let width = xr - xl;
    let mut w = 0i64;
    let mut area = 0.0;
    for k in 0..cut.len().saturating_sub(1) {
        w += cut[k].3;
        if w != 0 {
            let h = 0.5 * ((cut[k].1 - cut[k + 1].1) + (cut[k].2 - cut[k + 1].2));
            area += h * width * w.unsigned_abs() as f64;
        }
    }
    area
}

/// Seeded Monte Carlo estimate of `∫ |O| dA` over the bounding box, with its
/// standard error. Samples that land on the curve count as 0.
pub fn abs_winding_area_mc(poly: &PlanarPolyline, n: usize, seed: u64) -> (f64, f64) {
    let (lo, hi) = poly.bbox();
    let box_area = (hi[0] - lo[0]) * (hi[1] - lo[1]);
    let pts = &poly.vertices;
    let m: Moments = sample_chunks(n, seed, |rng, k| {
        let mut acc = Moments::default();
        for _ in 0..k {
            let p = [
                lo[0] + (hi[0] - lo[0]) * rng.random::<f64>(),
                lo[1] + (hi[1] - lo[1]) * rng.random::<f64>(),
            ];
            acc.push(crossing_count(p, pts).unsigned_abs() as f64);
        }
        acc
    });
    (box_area * m.mean(), box_area * m.std_error())
}
