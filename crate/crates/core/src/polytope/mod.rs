//! Oriented areas of polygons, volumes of closed polyhedral surfaces, and the
//! statics picture of a system of applied forces.

mod io;
mod mesh;
pub mod shapes;

pub use io::{mesh_from_json, mesh_to_json, mesh_to_obj, parse_obj};
pub use mesh::{
    boundary_edges, euler_characteristic, mesh_is_closed, mesh_is_closed_numeric, mesh_volume,
    omega3_residual, TriMesh,
};

use crate::error::{Error, Result};
use crate::exterior::{bivector_to_triangle, BiVector, GradedForm, Point3, Vector3};
use crate::sum::pairwise_sum;

const UNIT_NORMAL_TOL: f64 = 1e-9;
const COPLANAR_TOL: f64 = 1e-9;
const DISTINCT_TOL: f64 = 1e-12;

/// Closed polygon `A₁ … Aₙ` (the edge `AₙA₁` is implicit).
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon3 {
    vertices: Vec<Point3>,
}

impl Polygon3 {
    pub fn new(vertices: Vec<Point3>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::invalid(format!(
                "a polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::invalid(format!("vertex {i} is not finite")));
        }
        let scale = coordinate_scale(&vertices);
        let n = vertices.len();
        for i in 0..n {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            if a.distance(b) <= DISTINCT_TOL * scale {
                return Err(Error::invalid(format!(
                    "consecutive vertices {i} and {} coincide",
                    (i + 1) % n
                )));
            }
        }
        Ok(Polygon3 { vertices })
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges `(Aᵢ, Aᵢ₊₁)` including the closing one.
    pub fn edges(&self) -> impl Iterator<Item = (Point3, Point3)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn reversed(&self) -> Polygon3 {
        let mut v = self.vertices.clone();
        v.reverse();
        Polygon3 { vertices: v }
    }

    pub fn translated(&self, t: Vector3) -> Polygon3 {
        Polygon3 { vertices: self.vertices.iter().map(|&p| p + t).collect() }
    }

    pub fn centroid(&self) -> Point3 {
        let n = self.vertices.len() as f64;
        let sum = self
            .vertices
            .iter()
            .fold(Vector3::ZERO, |acc, p| acc + p.coords());
        Point3::ORIGIN + sum * (1.0 / n)
    }

    pub fn bbox_diagonal(&self) -> f64 {
        bbox_diagonal(&self.vertices)
    }
}

pub(crate) fn coordinate_scale(pts: &[Point3]) -> f64 {
    pts.iter()
        .flat_map(|p| p.to_array())
        .fold(0.0_f64, |m, c| m.max(c.abs()))
        .max(f64::MIN_POSITIVE)
}

pub(crate) fn bbox_diagonal(pts: &[Point3]) -> f64 {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in pts {
        for (k, c) in p.to_array().into_iter().enumerate() {
            lo[k] = lo[k].min(c);
            hi[k] = hi[k].max(c);
        }
    }
    (0..3)
        .map(|k| (hi[k] - lo[k]).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Bi-vector part of `Σ AᵢAᵢ₊₁`.
///
/// Terms are taken relative to `A₁`, which leaves the closed sum unchanged and
/// keeps the cross products well scaled for polygons far from the origin.
pub fn polygon_bivector(poly: &Polygon3) -> BiVector {
    bivector_of_closed_points(poly.vertices())
}

/// Same as [`polygon_bivector`] for any closed vertex loop, without validation.
pub fn bivector_of_closed_points(pts: &[Point3]) -> BiVector {
    let n = pts.len();
    if n < 3 {
        return BiVector::ZERO;
    }
    let base = pts[0];
    let terms: Vec<BiVector> = (1..n - 1)
        .map(|i| (pts[i] - base).wedge(pts[i + 1] - base))
        .collect();
    pairwise_sum(&terms)
}

/// `Σ AᵢAᵢ₊₁` as an element of `Λ²(W)`.
pub fn polygon_form(poly: &Polygon3) -> GradedForm {
    poly.edges().fold(GradedForm::zero(), |acc, (a, b)| {
        acc + GradedForm::point(a).wedge(&GradedForm::point(b))
    })
}

/// The tri-point sum `Σ P AᵢAᵢ₊₁`.
pub fn tri_point_sum(poly: &Polygon3, p: Point3) -> GradedForm {
    let pf = GradedForm::point(p);
    poly.edges().fold(GradedForm::zero(), |acc, (a, b)| {
        acc + pf.wedge(&GradedForm::point(a)).wedge(&GradedForm::point(b))
    })
}

fn check_plane(poly: &Polygon3, normal: Vector3) -> Result<()> {
    let len = normal.norm();
    if (len - 1.0).abs() > UNIT_NORMAL_TOL {
        return Err(Error::NonUnitNormal(len));
    }
    let base = poly.vertices[0];
    let tolerance = COPLANAR_TOL * poly.bbox_diagonal();
    let deviation = poly
        .vertices
        .iter()
        .map(|&p| (p - base).dot(normal).abs())
        .fold(0.0, f64::max);
    if deviation > tolerance {
        return Err(Error::NonCoplanar { deviation, tolerance });
    }
    Ok(())
}

/// Signed enclosed area of a planar polygon, positive when the vertices run
/// counter-clockwise about `plane_normal`.
pub fn polygon_area_signed(poly: &Polygon3, plane_normal: Vector3) -> Result<f64> {
    check_plane(poly, plane_normal)?;
    Ok(0.5 * polygon_bivector(poly).normal().dot(plane_normal))
}

/// Signed area read off the tri-point sum `Σ P AᵢAᵢ₊₁` for a base point `P`.
///
/// Pairing with the plane normal gives `Σ det(Aᵢ − P, Aᵢ₊₁ − P, n)`, twice the
/// signed area.
pub fn polygon_area_from_base(poly: &Polygon3, plane_normal: Vector3, p: Point3) -> Result<f64> {
    check_plane(poly, plane_normal)?;
    let pairing = tri_point_sum(poly, p).wedge(&GradedForm::vector(plane_normal));
    Ok(0.5 * pairing.top())
}

/// A triangle equipollent to the polygon, anchored at the vertex centroid.
pub fn equipollent_triangle(poly: &Polygon3) -> Result<(Point3, Point3, Point3)> {
    bivector_to_triangle(polygon_bivector(poly), poly.centroid())
}

/// Applied forces `{ (Aᵢ, fᵢ) }`, i.e. the bi-points `Aᵢ(Aᵢ + fᵢ)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ForceSystem {
    forces: Vec<(Point3, Vector3)>,
}

impl ForceSystem {
    pub fn new(forces: Vec<(Point3, Vector3)>) -> Result<Self> {
        for (i, (p, f)) in forces.iter().enumerate() {
            if !p.is_finite() || !f.is_finite() {
                return Err(Error::invalid(format!("force {i} is not finite")));
            }
        }
        Ok(ForceSystem { forces })
    }

    /// The edges `AᵢAᵢ₊₁` of a closed polygon read as forces.
    pub fn from_polygon_edges(poly: &Polygon3) -> Self {
        ForceSystem { forces: poly.edges().map(|(a, b)| (a, b - a)).collect() }
    }

    pub fn forces(&self) -> &[(Point3, Vector3)] {
        &self.forces
    }

    /// `Σ Aᵢ ∧ Bᵢ` in `Λ²(W)`.
    pub fn form(&self) -> GradedForm {
        self.forces.iter().fold(GradedForm::zero(), |acc, &(a, f)| {
            acc + GradedForm::point(a).wedge(&GradedForm::point(a + f))
        })
    }
}

/// Resultant and couple of a force system reduced at `p`.
pub fn forces_reduce(sys: &ForceSystem, p: Point3) -> (Vector3, BiVector) {
    let x = sys.form();
    let resultant = x.omega().vector_part();
    let couple = GradedForm::point(p).wedge(&x).omega().bivector_part();
    (resultant, couple)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{pair_equal, project_bivector, project_point};

    fn p(x: f64, y: f64, z: f64) -> Point3 {
        Point3::new(x, y, z)
    }

    fn unit_square() -> Polygon3 {
        Polygon3::new(vec![p(0., 0., 0.), p(1., 0., 0.), p(1., 1., 0.), p(0., 1., 0.)]).unwrap()
    }

    #[test]
    fn unit_square_bivector() {
        assert_eq!(polygon_bivector(&unit_square()), BiVector::new(0.0, 0.0, 2.0));
        assert_eq!(polygon_bivector(&unit_square().reversed()), BiVector::new(0.0, 0.0, -2.0));
    }

    #[test]
    fn algebra_route_matches_cross_products() {
        let poly = Polygon3::new(vec![
            p(0.3, -1.0, 2.0),
            p(1.7, 0.2, 0.5),
            p(0.9, 2.2, -1.0),
            p(-1.1, 0.4, 0.3),
            p(-0.5, -0.7, 1.1),
        ])
        .unwrap();
        let form = polygon_form(&poly);
        // the e₀ terms telescope to zero up to rounding
        assert!(form.omega().norm() < 1e-14);
        assert!(form.bivector_part().max_abs_diff(polygon_bivector(&poly)) < 1e-14);
    }

    #[test]
    fn triangle_bivector() {
        let (a, b, c) = (p(1., 2., 3.), p(2., 0., 1.), p(-1., 1., 0.));
        let tri = Polygon3::new(vec![a, b, c]).unwrap();
        assert!(polygon_bivector(&tri).max_abs_diff((b - a).wedge(c - a)) < 1e-15);
    }

    #[test]
    fn rejects_short_and_repeated() {
        assert!(Polygon3::new(vec![p(0., 0., 0.), p(1., 0., 0.)]).is_err());
        assert!(Polygon3::new(vec![p(0., 0., 0.), p(1., 0., 0.), p(1., 0., 0.)]).is_err());
        assert!(Polygon3::new(vec![p(0., 0., 0.), p(1., 0., 0.), p(0., 0., 0.)]).is_err());
    }

    #[test]
    fn signed_areas() {
        assert_eq!(polygon_area_signed(&unit_square(), Vector3::Z).unwrap(), 1.0);
        let tri = Polygon3::new(vec![p(0., 0., 0.), p(1., 0., 0.), p(0., 1., 0.)]).unwrap();
        assert_eq!(polygon_area_signed(&tri, Vector3::Z).unwrap(), 0.5);
        assert_eq!(polygon_area_signed(&tri, -Vector3::Z).unwrap(), -0.5);
    }

    #[test]
    fn area_rejects_bad_plane() {
        assert!(matches!(
            polygon_area_signed(&unit_square(), Vector3::new(0.0, 0.0, 2.0)),
            Err(Error::NonUnitNormal(_))
        ));
        let skew =
            Polygon3::new(vec![p(0., 0., 0.), p(1., 0., 0.), p(1., 1., 1.), p(0., 1., 0.)]).unwrap();
        assert!(matches!(
            polygon_area_signed(&skew, Vector3::Z),
            Err(Error::NonCoplanar { .. })
        ));
    }

    #[test]
    fn collinear_polygon_has_zero_area() {
        let line = Polygon3::new(vec![p(0., 0., 0.), p(1., 1., 1.), p(2., 2., 2.)]).unwrap();
        assert_eq!(polygon_bivector(&line).magnitude(), 0.0);
        assert!(matches!(equipollent_triangle(&line), Err(Error::DegenerateBivector)));
    }

    #[test]
    fn base_point_sum_matches_area() {
        let sq = unit_square();
        for &base in &[p(0.5, 0.5, 0.0), p(-3.0, 7.0, 0.0), p(100.0, -20.0, 0.0)] {
            let a = polygon_area_from_base(&sq, Vector3::Z, base).unwrap();
            assert!((a - 1.0).abs() < 1e-12, "{a}");
        }
    }

    #[test]
    fn equipollent_triangle_of_skew_quad() {
        let quad =
            Polygon3::new(vec![p(0., 0., 0.), p(1., 0., 0.), p(1., 1., 1.), p(0., 1., 0.)]).unwrap();
        let b = polygon_bivector(&quad);
        let (x, y, z) = equipollent_triangle(&quad).unwrap();
        assert!((y - x).wedge(z - x).max_abs_diff(b) < 1e-12);
        // projected along each axis onto the coordinate planes
        for (n, d) in [(Vector3::Z, Vector3::Z), (Vector3::X, Vector3::X), (Vector3::Y, Vector3::Y)] {
            let proj = |q: Point3| project_point(q, n, d);
            let pq: Vec<Point3> = quad.vertices().iter().map(|&q| proj(q)).collect();
            let tri_b = project_bivector((y - x).wedge(z - x), n, d);
            assert!(bivector_of_closed_points(&pq).max_abs_diff(tri_b) < 1e-12);
        }
    }

    #[test]
    fn planar_polygon_gives_coplanar_triangle() {
        let poly = unit_square().translated(Vector3::new(0.0, 0.0, 3.0));
        let (x, y, z) = equipollent_triangle(&poly).unwrap();
        assert!([x.z, y.z, z.z].iter().all(|&h| (h - 3.0).abs() < 1e-12));
    }

    #[test]
    fn doubly_traversed_square_doubles() {
        let sq = unit_square();
        let mut twice = sq.vertices().to_vec();
        twice.extend_from_slice(sq.vertices());
        let twice = Polygon3::new(twice).unwrap();
        let (x, y, z) = equipollent_triangle(&twice).unwrap();
        assert!((y - x).wedge(z - x).max_abs_diff(BiVector::new(0.0, 0.0, 4.0)) < 1e-12);
    }

    #[test]
    fn textbook_couple() {
        let sys = ForceSystem::new(vec![
            (p(0., 0., 0.), Vector3::X),
            (p(0., 1., 0.), -Vector3::X),
        ])
        .unwrap();
        let (r, c) = forces_reduce(&sys, p(5.0, -2.0, 1.0));
        assert_eq!(r, Vector3::ZERO);
        assert!(c.max_abs_diff(Vector3::X.wedge(Vector3::Y)) < 1e-15);
    }

    #[test]
    fn single_force_moment() {
        let a = p(1.0, 2.0, 3.0);
        let f = Vector3::new(0.5, -1.0, 2.0);
        let sys = ForceSystem::new(vec![(a, f)]).unwrap();
        let at = p(-1.0, 0.0, 4.0);
        let (r, c) = forces_reduce(&sys, at);
        assert_eq!(r, f);
        assert!(c.max_abs_diff((a - at).wedge(f)) < 1e-14);
        let rebuilt = GradedForm::point(at).wedge(&GradedForm::vector(r)) + GradedForm::bivector(c);
        assert!(pair_equal(&rebuilt, &sys.form(), 1e-12).unwrap());
    }

    #[test]
    fn polygon_edges_reduce_to_bivector() {
        let sq = unit_square();
        let (r, c) = forces_reduce(&ForceSystem::from_polygon_edges(&sq), p(3.0, 3.0, 3.0));
        assert_eq!(r, Vector3::ZERO);
        assert!(c.max_abs_diff(polygon_bivector(&sq)) < 1e-14);
        assert!((0.5 * c.xy - polygon_area_signed(&sq, Vector3::Z).unwrap()).abs() < 1e-14);
    }
}
