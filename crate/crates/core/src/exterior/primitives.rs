//! Points, vectors, bi-vectors and tri-vectors of Euclidean 3-space.
//!
//! These are the mass-1, mass-0, `Λ²(V)` and `Λ³(V)` pieces of the graded
//! algebra, kept as small `Copy` structs so the geometry code does not have to
//! go through 16-coefficient forms for every cross product.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vector3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Bi-vector on the basis `e₂e₃`, `e₃e₁`, `e₁e₂`.
///
/// For a closed curve the magnitude is twice the enclosed area (for a simple
/// planar curve), matching the chord-sum convention used throughout.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BiVector {
    pub yz: f64,
    pub zx: f64,
    pub xy: f64,
}

/// Coefficient on `e₁e₂e₃`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TriVector(pub f64);

impl Point3 {
    pub const ORIGIN: Point3 = Point3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    /// Position vector relative to the origin.
    pub fn coords(self) -> Vector3 {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn distance(self, other: Point3) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(a: [f64; 3]) -> Self {
        Point3::new(a[0], a[1], a[2])
    }
}

impl Vector3 {
    pub const ZERO: Vector3 = Vector3 { x: 0.0, y: 0.0, z: 0.0 };
    pub const X: Vector3 = Vector3 { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: Vector3 = Vector3 { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: Vector3 = Vector3 { x: 0.0, y: 0.0, z: 1.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vector3 { x, y, z }
    }

    pub fn dot(self, o: Vector3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vector3) -> Vector3 {
        Vector3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    /// `self ∧ o` as a bi-vector; component-wise this is the cross product.
    pub fn wedge(self, o: Vector3) -> BiVector {
        let c = self.cross(o);
        BiVector::new(c.x, c.y, c.z)
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Option<Vector3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn component(self, axis: usize) -> f64 {
        match axis {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl From<[f64; 3]> for Vector3 {
    fn from(a: [f64; 3]) -> Self {
        Vector3::new(a[0], a[1], a[2])
    }
}

impl BiVector {
    pub const ZERO: BiVector = BiVector { yz: 0.0, zx: 0.0, xy: 0.0 };

    pub const fn new(yz: f64, zx: f64, xy: f64) -> Self {
        BiVector { yz, zx, xy }
    }

    pub fn magnitude(self) -> f64 {
        let m = self.yz.abs().max(self.zx.abs()).max(self.xy.abs());
        if m == 0.0 || !m.is_finite() {
            return m;
        }
        m * (self * (1.0 / m)).normal().norm()
    }

    /// The vector `(yz, zx, xy)` orthogonal to the bi-vector's plane (Hodge dual).
    pub fn normal(self) -> Vector3 {
        Vector3::new(self.yz, self.zx, self.xy)
    }

    pub fn from_normal(n: Vector3) -> Self {
        BiVector::new(n.x, n.y, n.z)
    }

    /// Inner product with another bi-vector (components are orthonormal).
    pub fn dot(self, o: BiVector) -> f64 {
        self.normal().dot(o.normal())
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.yz, self.zx, self.xy]
    }

    pub fn max_abs_diff(self, o: BiVector) -> f64 {
        (self.yz - o.yz)
            .abs()
            .max((self.zx - o.zx).abs())
            .max((self.xy - o.xy).abs())
    }
}

impl TriVector {
    pub fn magnitude(self) -> f64 {
        self.0.abs()
    }
}

impl Sub for Point3 {
    type Output = Vector3;
    fn sub(self, o: Point3) -> Vector3 {
        Vector3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Add<Vector3> for Point3 {
    type Output = Point3;
    fn add(self, v: Vector3) -> Point3 {
        Point3::new(self.x + v.x, self.y + v.y, self.z + v.z)
    }
}

impl Sub<Vector3> for Point3 {
    type Output = Point3;
    fn sub(self, v: Vector3) -> Point3 {
        Point3::new(self.x - v.x, self.y - v.y, self.z - v.z)
    }
}

impl Add for Vector3 {
    type Output = Vector3;
    fn add(self, o: Vector3) -> Vector3 {
        Vector3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vector3 {
    fn add_assign(&mut self, o: Vector3) {
        *self = *self + o;
    }
}

impl Sub for Vector3 {
    type Output = Vector3;
    fn sub(self, o: Vector3) -> Vector3 {
        Vector3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vector3 {
    type Output = Vector3;
    fn neg(self) -> Vector3 {
        Vector3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vector3 {
    type Output = Vector3;
    fn mul(self, s: f64) -> Vector3 {
        Vector3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vector3> for f64 {
    type Output = Vector3;
    fn mul(self, v: Vector3) -> Vector3 {
        v * self
    }
}

impl Add for BiVector {
    type Output = BiVector;
    fn add(self, o: BiVector) -> BiVector {
        BiVector::new(self.yz + o.yz, self.zx + o.zx, self.xy + o.xy)
    }
}

impl AddAssign for BiVector {
    fn add_assign(&mut self, o: BiVector) {
        *self = *self + o;
    }
}

impl Sub for BiVector {
    type Output = BiVector;
    fn sub(self, o: BiVector) -> BiVector {
        BiVector::new(self.yz - o.yz, self.zx - o.zx, self.xy - o.xy)
    }
}

impl Neg for BiVector {
    type Output = BiVector;
    fn neg(self) -> BiVector {
        BiVector::new(-self.yz, -self.zx, -self.xy)
    }
}

impl Mul<f64> for BiVector {
    type Output = BiVector;
    fn mul(self, s: f64) -> BiVector {
        BiVector::new(self.yz * s, self.zx * s, self.xy * s)
    }
}

impl Add for TriVector {
    type Output = TriVector;
    fn add(self, o: TriVector) -> TriVector {
        TriVector(self.0 + o.0)
    }
}

/// Determinant of the 3×3 matrix with columns `a`, `b`, `c`.
pub fn det3(a: Vector3, b: Vector3, c: Vector3) -> f64 {
    a.dot(b.cross(c))
}
