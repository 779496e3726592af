use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exterior::Point3;
use crate::polytope::TriMesh;
use crate::sum::par_sum_indexed;

/// How consecutive layers of the lantern are joined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LanternLayout {
    /// Ring `s` is turned by `(s mod 2)·π/m`, so each layer's apex ring is the
    /// next layer's base ring and the lantern is one connected band.
    #[default]
    Alternating,
    /// Every layer uses the unturned base ring and the half-step apex ring, so
    /// layers are separate zigzag bands with their own vertices.
    Literal,
}

fn check(m: usize, n: usize) -> Result<()> {
    if m < 3 || n < 1 {
        return Err(Error::invalid(format!("lantern needs m >= 3 and n >= 1, got m={m}, n={n}")));
    }
    Ok(())
}

/// `2m sin(π/m) √(1 + 4n² sin⁴(π/2m))`.
pub fn lantern_area_closed_form(m: usize, n: usize) -> f64 {
    let (mf, nf) = (m as f64, n as f64);
    let q = (PI / (2.0 * mf)).sin().powi(2);
    2.0 * mf * (PI / mf).sin() * (1.0 + 4.0 * nf * nf * q * q).sqrt()
}

/// The Schwarz lantern `S_{m,n}` inscribed in the unit cylinder of height 1:
/// `2mn` triangles, outward oriented, open at top and bottom.
pub fn schwarz_lantern(m: usize, n: usize) -> Result<TriMesh> {
    schwarz_lantern_with(m, n, LanternLayout::Alternating)
}

pub fn schwarz_lantern_with(m: usize, n: usize, layout: LanternLayout) -> Result<TriMesh> {
    check(m, n)?;
    let ring = |turn: f64, h: f64| -> Vec<Point3> {
        (0..m)
            .map(|r| {
                let a = (2.0 * r as f64 + turn) * PI / m as f64;
                Point3::new(a.cos(), a.sin(), h)
            })
            .collect()
    };
    let mut vertices = Vec::new();
    let mut triangles = Vec::with_capacity(2 * m * n);
    match layout {
        LanternLayout::Alternating => {
            for s in 0..=n {
                vertices.extend(ring((s % 2) as f64, s as f64 / n as f64));
            }
            for s in 0..n {
                let base = |r: usize| s * m + r % m;
                let apex = |r: usize| (s + 1) * m + (r + s % 2) % m;
                for r in 0..m {
                    triangles.push([base(r), base(r + 1), apex(r)]);
                }
                for r in 0..m {
                    triangles.push([base(r), apex(r), apex(r + m - 1)]);
                }
            }
        }
        LanternLayout::Literal => {
            for s in 0..n {
                vertices.extend(ring(0.0, s as f64 / n as f64));
            }
            for s in 1..=n {
                vertices.extend(ring(1.0, s as f64 / n as f64));
            }
            for s in 0..n {
                let base = |r: usize| s * m + r % m;
                let apex = |r: usize| n * m + s * m + r % m;
                for r in 0..m {
                    triangles.push([base(r), base(r + 1), apex(r)]);
                }
                for r in 0..m {
                    triangles.push([base(r), apex(r), apex(r + m - 1)]);
                }
            }
        }
    }
    TriMesh::new(vertices, triangles)
}

/// `Σ ½ |(B − A) ∧ (C − A)|`.
pub fn mesh_area(mesh: &TriMesh) -> f64 {
    par_sum_indexed(mesh.triangles().len(), |i| {
        let [a, b, c] = mesh.triangle(i);
        0.5 * (b - a).cross(c - a).norm()
    })
}

/// `mesh_area(schwarz_lantern(m, n))` without building the mesh, for lanterns
/// too large to hold in memory.
pub fn lantern_mesh_area(m: usize, n: usize) -> Result<f64> {
    check(m, n)?;
    // ring s vertex r sits at angle (2r + s mod 2)·π/m
    let table: Vec<(f64, f64)> = (0..2 * m)
        .map(|k| {
            let a = k as f64 * PI / m as f64;
            (a.cos(), a.sin())
        })
        .collect();
    let point = |s: usize, r: usize| {
        let (c, si) = table[(2 * (r % m) + s % 2) % (2 * m)];
        Point3::new(c, si, s as f64 / n as f64)
    };
    let total = 2 * m * n;
    Ok(par_sum_indexed(total, |idx| {
        let s = idx / (2 * m);
        let c = idx % (2 * m);
        let r = c % m;
        let apex = |r: usize| point(s + 1, r + s % 2);
        let [a, b, cc] = if c < m {
            [point(s, r), point(s, r + 1), apex(r)]
        } else {
            [point(s, r), apex(r), apex(r + m - 1)]
        };
        0.5 * (b - a).cross(cc - a).norm()
    }))
}
