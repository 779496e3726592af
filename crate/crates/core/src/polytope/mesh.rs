use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::exterior::{det3, BiVector, Point3};
use crate::sum::par_sum_indexed;

/// Oriented triangle soup.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    vertices: Vec<Point3>,
    triangles: Vec<[usize; 3]>,
}

impl TriMesh {
    pub fn new(vertices: Vec<Point3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::invalid(format!("vertex {i} is not finite")));
        }
        for (t, tri) in triangles.iter().enumerate() {
            if let Some(&bad) = tri.iter().find(|&&i| i >= vertices.len()) {
                return Err(Error::invalid(format!(
                    "triangle {t} references vertex {bad}, but there are only {}",
                    vertices.len()
                )));
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::invalid(format!("triangle {t} repeats a vertex index")));
            }
        }
        Ok(TriMesh { vertices, triangles })
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn triangle(&self, i: usize) -> [Point3; 3] {
        self.triangles[i].map(|k| self.vertices[k])
    }

    pub fn reversed(&self) -> TriMesh {
        TriMesh {
            vertices: self.vertices.clone(),
            triangles: self.triangles.iter().map(|&[a, b, c]| [a, c, b]).collect(),
        }
    }

    /// Drops triangle `i`.
    pub fn without_triangle(&self, i: usize) -> TriMesh {
        let mut triangles = self.triangles.clone();
        triangles.remove(i);
        TriMesh { vertices: self.vertices.clone(), triangles }
    }

    /// Disjoint union; indices of `other` are shifted.
    pub fn union(&self, other: &TriMesh) -> TriMesh {
        let off = self.vertices.len();
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices);
        let mut triangles = self.triangles.clone();
        triangles.extend(other.triangles.iter().map(|t| t.map(|k| k + off)));
        TriMesh { vertices, triangles }
    }

    pub fn map_vertices(&self, f: impl Fn(Point3) -> Point3) -> TriMesh {
        TriMesh {
            vertices: self.vertices.iter().map(|&p| f(p)).collect(),
            triangles: self.triangles.clone(),
        }
    }

    pub fn bbox(&self) -> (Point3, Point3) {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in &self.vertices {
            for (k, c) in p.to_array().into_iter().enumerate() {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
        (Point3::from(lo), Point3::from(hi))
    }
}

fn directed_edge_counts(mesh: &TriMesh) -> HashMap<(usize, usize), usize> {
    let mut counts = HashMap::with_capacity(mesh.triangles.len() * 3);
    for &[a, b, c] in &mesh.triangles {
        for e in [(a, b), (b, c), (c, a)] {
            *counts.entry(e).or_insert(0) += 1;
        }
    }
    counts
}

/// Directed edges that are not matched by exactly one reversed copy.
pub fn boundary_edges(mesh: &TriMesh) -> Vec<(usize, usize)> {
    let counts = directed_edge_counts(mesh);
    let mut out: Vec<(usize, usize)> = counts
        .iter()
        .filter(|&(&(a, b), &n)| n != 1 || counts.get(&(b, a)).copied() != Some(1))
        .map(|(&e, _)| e)
        .collect();
    out.sort_unstable();
    out
}

/// Combinatorial closedness: every directed edge occurs once and its reverse
/// occurs once.
pub fn mesh_is_closed(mesh: &TriMesh) -> bool {
    !mesh.triangles.is_empty() && boundary_edges(mesh).is_empty()
}

/// `ω₃(Σ AᵢBᵢCᵢ) = Σ (Bᵢ − Aᵢ)(Cᵢ − Aᵢ)`, which vanishes on closed surfaces.
pub fn omega3_residual(mesh: &TriMesh) -> BiVector {
    par_sum_indexed(mesh.triangles.len(), |i| {
        let [a, b, c] = mesh.triangle(i);
        (b - a).wedge(c - a)
    })
}

/// Numeric closedness through `ω₃`; tolerance is relative to the total
/// absolute face bi-vector. Can report closed for open surfaces whose
/// boundary happens to have zero bi-vector, so [`mesh_is_closed`] is the
/// authoritative check.
pub fn mesh_is_closed_numeric(mesh: &TriMesh, tol: f64) -> bool {
    let total: f64 = par_sum_indexed(mesh.triangles.len(), |i| {
        let [a, b, c] = mesh.triangle(i);
        (b - a).wedge(c - a).magnitude()
    });
    omega3_residual(mesh).magnitude() <= tol * total
}

/// `Σ vol(P AᵢBᵢCᵢ)`; independent of `p` on a closed surface.
pub fn mesh_volume(mesh: &TriMesh, p: Point3) -> Result<f64> {
    if !mesh_is_closed(mesh) {
        return Err(Error::SurfaceNotClosed);
    }
    let six_vol: f64 = par_sum_indexed(mesh.triangles.len(), |i| {
        let [a, b, c] = mesh.triangle(i);
        det3(a - p, b - p, c - p)
    });
    Ok(six_vol / 6.0)
}

/// `V − E + F` with `V` the referenced vertices and `E` the undirected edges.
pub fn euler_characteristic(mesh: &TriMesh) -> i64 {
    let mut verts = HashSet::new();
    let mut edges = HashSet::new();
    for &[a, b, c] in &mesh.triangles {
        verts.extend([a, b, c]);
        for (x, y) in [(a, b), (b, c), (c, a)] {
            edges.insert((x.min(y), x.max(y)));
        }
    }
    verts.len() as i64 - edges.len() as i64 + mesh.triangles.len() as i64
}
