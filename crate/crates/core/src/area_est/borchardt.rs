use rand::Rng;
use serde::Serialize;

use super::surface::ParametricSurface;
use crate::error::{Error, Result};
use crate::exterior::{Point3, Vector3};
use crate::polytope::TriMesh;
use crate::sampling::{sample_chunks, Moments};

pub const MIN_SAMPLES: usize = 10_000;
/// Grid used to triangulate parametric surfaces before sampling.
pub const SURFACE_GRID: usize = 128;
const MAX_CELLS_PER_AXIS: f64 = 256.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BorchardtEstimate {
    /// `Volume{dist < h} / 2h`.
    pub value: f64,
    pub std_error: f64,
    pub h: f64,
    pub n_samples: usize,
    pub seed: u64,
    pub box_volume: f64,
    pub hit_fraction: f64,
}

/// Splits the unit square into `grid²` cells, two triangles each.
pub fn triangulate(s: &ParametricSurface, grid: usize) -> Result<TriMesh> {
    if grid == 0 {
        return Err(Error::invalid("triangulation grid must be positive"));
    }
    let side = grid + 1;
    let mut vertices = Vec::with_capacity(side * side);
    for j in 0..side {
        for i in 0..side {
            vertices.push(s.point(i as f64 / grid as f64, j as f64 / grid as f64)?);
        }
    }
    let mut triangles = Vec::with_capacity(2 * grid * grid);
    for j in 0..grid {
        for i in 0..grid {
            let a = j * side + i;
            let (b, c, d) = (a + 1, a + side + 1, a + side);
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    TriMesh::new(vertices, triangles)
}

/// Closest point on triangle `abc` to `p`.
pub fn closest_point_on_triangle(p: Point3, a: Point3, b: Point3, c: Point3) -> Point3 {
    let (ab, ac, ap) = (b - a, c - a, p - a);
    let (d1, d2) = (ab.dot(ap), ac.dot(ap));
    if d1 <= 0.0 && d2 <= 0.0 {
        return a;
    }
    let bp = p - b;
    let (d3, d4) = (ab.dot(bp), ac.dot(bp));
    if d3 >= 0.0 && d4 <= d3 {
        return b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return a + ab * (d1 / (d1 - d3));
    }
    let cp = p - c;
    let (d5, d6) = (ab.dot(cp), ac.dot(cp));
    if d6 >= 0.0 && d5 <= d6 {
        return c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return a + ac * (d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0 {
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let denom = va + vb + vc;
    if denom == 0.0 {
        // degenerate triangle: fall back to its edges
        return [(a, b), (b, c), (c, a)]
            .into_iter()
            .map(|(x, y)| closest_on_segment(p, x, y))
            .min_by(|x, y| x.distance(p).total_cmp(&y.distance(p)))
            .expect("three edges");
    }
    a + ab * (vb / denom) + ac * (vc / denom)
}

fn closest_on_segment(p: Point3, a: Point3, b: Point3) -> Point3 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return a;
    }
    a + ab * ((p - a).dot(ab) / len2).clamp(0.0, 1.0)
}

/// Uniform grid over the sampling box; each cell lists the triangles whose
/// `h`-inflated bounding box meets it.
struct TriangleGrid {
    lo: Point3,
    cell: f64,
    dims: [usize; 3],
    offsets: Vec<usize>,
    items: Vec<usize>,
}

impl TriangleGrid {
    fn new(mesh: &TriMesh, lo: Point3, hi: Point3, h: f64) -> Self {
        let ext = hi - lo;
        let longest = ext.x.max(ext.y).max(ext.z);
        let cell = (2.0 * h).max(longest / MAX_CELLS_PER_AXIS);
        let dims = ext.to_array().map(|e| ((e / cell).ceil() as usize).max(1));
        let ncells = dims[0] * dims[1] * dims[2];
        let ranges: Vec<[[usize; 2]; 3]> = (0..mesh.triangles().len())
            .map(|i| {
                let [a, b, c] = mesh.triangle(i);
                let mut r = [[0; 2]; 3];
                for k in 0..3 {
                    let (pa, pb, pc) = (a.to_array()[k], b.to_array()[k], c.to_array()[k]);
                    let tlo = pa.min(pb).min(pc) - h - lo.to_array()[k];
                    let thi = pa.max(pb).max(pc) + h - lo.to_array()[k];
                    r[k] = [self_clamp(tlo / cell, dims[k]), self_clamp(thi / cell, dims[k])];
                }
                r
            })
            .collect();
        let mut counts = vec![0usize; ncells + 1];
        let each = |r: &[[usize; 2]; 3], f: &mut dyn FnMut(usize)| {
            for z in r[2][0]..=r[2][1] {
                for y in r[1][0]..=r[1][1] {
                    for x in r[0][0]..=r[0][1] {
                        f((z * dims[1] + y) * dims[0] + x);
                    }
                }
            }
        };
        for r in &ranges {
            each(r, &mut |c| counts[c + 1] += 1);
        }
        for c in 0..ncells {
            counts[c + 1] += counts[c];
        }
        let mut fill = counts.clone();
        let mut items = vec![0usize; counts[ncells]];
        for (t, r) in ranges.iter().enumerate() {
            each(r, &mut |c| {
                items[fill[c]] = t;
                fill[c] += 1;
            });
        }
        TriangleGrid { lo, cell, dims, offsets: counts, items }
    }

    fn candidates(&self, p: Point3) -> &[usize] {
        let rel = (p - self.lo).to_array();
        let idx: Vec<usize> = (0..3).map(|k| self_clamp(rel[k] / self.cell, self.dims[k])).collect();
        let c = (idx[2] * self.dims[1] + idx[1]) * self.dims[0] + idx[0];
        &self.items[self.offsets[c]..self.offsets[c + 1]]
    }
}

fn self_clamp(x: f64, dim: usize) -> usize {
    if x <= 0.0 {
        0
    } else {
        (x.floor() as usize).min(dim - 1)
    }
}

/// Monte Carlo estimate of `Volume{x : dist(x, S) < h} / 2h` by uniform
/// sampling of the mesh bounding box inflated by `h`.
pub fn borchardt_area(mesh: &TriMesh, h: f64, n_samples: usize, seed: u64) -> Result<BorchardtEstimate> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid(format!("h must be positive, got {h}")));
    }
    if n_samples < MIN_SAMPLES {
        return Err(Error::invalid(format!(
            "need at least {MIN_SAMPLES} samples, got {n_samples}"
        )));
    }
    if mesh.triangles().is_empty() {
        return Err(Error::invalid("mesh has no triangles"));
    }
    let (lo, hi) = mesh.bbox();
    let pad = Vector3::new(h, h, h);
    let (lo, hi) = (lo - pad, hi + pad);
    let ext = hi - lo;
    let box_volume = ext.x * ext.y * ext.z;
    let grid = TriangleGrid::new(mesh, lo, hi, h);
    let h2 = h * h;
    let m: Moments = sample_chunks(n_samples, seed, |rng, k| {
        let mut acc = Moments::default();
        for _ in 0..k {
            let p = Point3::new(
                lo.x + ext.x * rng.random::<f64>(),
                lo.y + ext.y * rng.random::<f64>(),
                lo.z + ext.z * rng.random::<f64>(),
            );
            let hit = grid.candidates(p).iter().any(|&t| {
                let [a, b, c] = mesh.triangle(t);
                let q = closest_point_on_triangle(p, a, b, c);
                let d = p - q;
                d.dot(d) < h2
            });
            acc.push(if hit { 1.0 } else { 0.0 });
        }
        acc
    });
    let scale = box_volume / (2.0 * h);
    Ok(BorchardtEstimate {
        value: scale * m.mean(),
        std_error: scale * m.std_error(),
        h,
        n_samples,
        seed,
        box_volume,
        hit_fraction: m.mean(),
    })
}

/// [`borchardt_area`] on the surface triangulated at [`SURFACE_GRID`].
pub fn borchardt_area_surface(
    s: &ParametricSurface,
    h: f64,
    n_samples: usize,
    seed: u64,
) -> Result<BorchardtEstimate> {
    borchardt_area(&triangulate(s, SURFACE_GRID)?, h, n_samples, seed)
}

/// Intercept at `h = 0` of the least-squares line through `(h, value)` pairs.
pub fn extrapolate_to_zero(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::invalid("need at least two (h, value) pairs"));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("need at least two distinct h values"));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(my - sxy / sxx * mx)
}
