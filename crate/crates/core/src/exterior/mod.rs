//! Graded exterior algebra on the 4-dimensional Möbius space `(W, ω)`.
//!
//! `W` is modelled as `ℝ⁴` with basis `e₀, e₁, e₂, e₃`, where `e₀` is the origin
//! point (mass 1) and `e₁, e₂, e₃` are orthonormal vectors (mass 0). A point
//! `(x, y, z)` embeds as `e₀ + x e₁ + y e₂ + z e₃`, so the mass form is simply
//! the `e₀` coordinate.
//!
//! A [`GradedForm`] stores one coefficient per basis monomial. Monomials are
//! indexed by bitmask (bit `i` set when `eᵢ` is a factor) and always kept in
//! sorted order `e₀ < e₁ < e₂ < e₃`; any sign coming from reordering factors is
//! folded into the coefficient when the product is formed.

mod primitives;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use primitives::{det3, BiVector, Point3, TriVector, Vector3};

use crate::error::{Error, Result};

/// Basis monomials as bitmasks, grouped by grade and lexicographic inside a grade.
pub const BASIS: [u8; 16] = [
    0b0000, // 1
    0b0001, 0b0010, 0b0100, 0b1000, // e0 e1 e2 e3
    0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100, // e01 e02 e03 e12 e13 e23
    0b0111, 0b1011, 0b1101, 0b1110, // e012 e013 e023 e123
    0b1111, // e0123
];

const E0: usize = 0b0001;
const E12: usize = 0b0110;
const E13: usize = 0b1010;
const E23: usize = 0b1100;
const E123: usize = 0b1110;
const E0123: usize = 0b1111;

fn grade_of(mask: usize) -> usize {
    mask.count_ones() as usize
}

/// Sign picked up by `e_a · e_b` when the concatenated factors are sorted.
fn reorder_sign(a: usize, b: usize) -> f64 {
    let mut swaps = 0;
    for i in 0..4 {
        if b & (1 << i) != 0 {
            // every factor of `a` with a larger index must hop over e_i
            swaps += (a >> (i + 1)).count_ones();
        }
    }
    if swaps % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Element of `Λ(W) = Λ⁰ ⊕ … ⊕ Λ⁴`.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct GradedForm {
    coeffs: [f64; 16],
}

impl GradedForm {
    pub const fn zero() -> Self {
        GradedForm { coeffs: [0.0; 16] }
    }

    pub fn scalar(s: f64) -> Self {
        let mut f = Self::zero();
        f.coeffs[0] = s;
        f
    }

    /// Unit coefficient on the monomial given by `mask` (bits 0..3 ↔ e₀..e₃).
    pub fn monomial(mask: u8) -> Self {
        let mut f = Self::zero();
        f.coeffs[(mask & 0xF) as usize] = 1.0;
        f
    }

    /// `eᵢ` for `i ∈ 0..4`.
    pub fn basis_vector(i: usize) -> Self {
        assert!(i < 4, "W has dimension 4");
        Self::monomial(1 << i)
    }

    pub fn point(p: Point3) -> Self {
        let mut f = Self::zero();
        f.coeffs[0b0001] = 1.0;
        f.coeffs[0b0010] = p.x;
        f.coeffs[0b0100] = p.y;
        f.coeffs[0b1000] = p.z;
        f
    }

    pub fn vector(v: Vector3) -> Self {
        let mut f = Self::zero();
        f.coeffs[0b0010] = v.x;
        f.coeffs[0b0100] = v.y;
        f.coeffs[0b1000] = v.z;
        f
    }

    pub fn bivector(b: BiVector) -> Self {
        let mut f = Self::zero();
        f.coeffs[E23] = b.yz;
        f.coeffs[E13] = -b.zx;
        f.coeffs[E12] = b.xy;
        f
    }

    pub fn trivector(t: TriVector) -> Self {
        let mut f = Self::zero();
        f.coeffs[E123] = t.0;
        f
    }

    pub fn coeff(&self, mask: u8) -> f64 {
        self.coeffs[(mask & 0xF) as usize]
    }

    pub fn set_coeff(&mut self, mask: u8, value: f64) {
        self.coeffs[(mask & 0xF) as usize] = value;
    }

    /// Coefficients in [`BASIS`] order.
    pub fn to_basis_array(&self) -> [f64; 16] {
        BASIS.map(|m| self.coeffs[m as usize])
    }

    /// Coefficient of the top monomial `e₀e₁e₂e₃`.
    pub fn top(&self) -> f64 {
        self.coeffs[E0123]
    }

    pub fn grade_part(&self, k: usize) -> Self {
        let mut f = Self::zero();
        for (m, c) in self.coeffs.iter().enumerate() {
            if grade_of(m) == k {
                f.coeffs[m] = *c;
            }
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// `Some(k)` when every non-zero coefficient has grade `k`; the zero form
    /// reports `Some(0)`.
    pub fn homogeneous_grade(&self) -> Option<usize> {
        let mut grade = None;
        for (m, &c) in self.coeffs.iter().enumerate() {
            if c != 0.0 {
                match grade {
                    None => grade = Some(grade_of(m)),
                    Some(g) if g != grade_of(m) => return None,
                    Some(_) => {}
                }
            }
        }
        Some(grade.unwrap_or(0))
    }

    /// True when the form lies in `G(V)`, i.e. no monomial containing `e₀`.
    pub fn is_vector_form(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(m, &c)| m & E0 == 0 || c == 0.0)
    }

    /// The `Λ²(V)` components, ignoring everything else.
    pub fn bivector_part(&self) -> BiVector {
        BiVector::new(self.coeffs[E23], -self.coeffs[E13], self.coeffs[E12])
    }

    pub fn vector_part(&self) -> Vector3 {
        Vector3::new(self.coeffs[0b0010], self.coeffs[0b0100], self.coeffs[0b1000])
    }

    pub fn trivector_part(&self) -> TriVector {
        TriVector(self.coeffs[E123])
    }

    /// Euclidean norm of the coefficient array.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Exterior product. Bilinear and associative; products above grade 4 vanish.
    pub fn wedge(&self, other: &GradedForm) -> GradedForm {
        let mut out = [0.0; 16];
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for (b, &cb) in other.coeffs.iter().enumerate() {
                if cb == 0.0 || a & b != 0 {
                    continue;
                }
                out[a | b] += reorder_sign(a, b) * ca * cb;
            }
        }
        GradedForm { coeffs: out }
    }

    /// The extended mass map `ω : Λᵏ(W) → Λᵏ⁻¹(V)`.
    ///
    /// It is the graded derivation with `ω(e₀) = 1`, `ω(eᵢ) = 0`; on a sorted
    /// monomial this just strips a leading `e₀`.
    pub fn omega(&self) -> GradedForm {
        let mut out = [0.0; 16];
        for (m, &c) in self.coeffs.iter().enumerate() {
            if m & E0 != 0 {
                out[m & !E0] += c;
            }
        }
        GradedForm { coeffs: out }
    }
}

impl Add for GradedForm {
    type Output = GradedForm;
    fn add(mut self, o: GradedForm) -> GradedForm {
        for (a, b) in self.coeffs.iter_mut().zip(o.coeffs) {
            *a += b;
        }
        self
    }
}

impl Sub for GradedForm {
    type Output = GradedForm;
    fn sub(mut self, o: GradedForm) -> GradedForm {
        for (a, b) in self.coeffs.iter_mut().zip(o.coeffs) {
            *a -= b;
        }
        self
    }
}

impl Neg for GradedForm {
    type Output = GradedForm;
    fn neg(self) -> GradedForm {
        self * -1.0
    }
}

impl Mul<f64> for GradedForm {
    type Output = GradedForm;
    fn mul(mut self, s: f64) -> GradedForm {
        for a in self.coeffs.iter_mut() {
            *a *= s;
        }
        self
    }
}

impl From<Point3> for GradedForm {
    fn from(p: Point3) -> Self {
        GradedForm::point(p)
    }
}

impl From<Vector3> for GradedForm {
    fn from(v: Vector3) -> Self {
        GradedForm::vector(v)
    }
}

impl From<BiVector> for GradedForm {
    fn from(b: BiVector) -> Self {
        GradedForm::bivector(b)
    }
}

impl fmt::Debug for GradedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedForm({self})")
    }
}

impl fmt::Display for GradedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &m in BASIS.iter() {
            let c = self.coeffs[m as usize];
            if c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            if m != 0 {
                write!(f, " e")?;
                for i in 0..4 {
                    if m & (1 << i) != 0 {
                        write!(f, "{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Wedge of an arbitrary list of forms, left to right.
pub fn wedge_all<'a>(forms: impl IntoIterator<Item = &'a GradedForm>) -> GradedForm {
    forms
        .into_iter()
        .fold(GradedForm::scalar(1.0), |acc, f| acc.wedge(f))
}

/// Splits a homogeneous `x` into `(P·ω(x), ω(P·x))`, which sum back to `x`.
///
/// For a force system this is the resultant applied at `P` plus the couple.
pub fn reduce(x: &GradedForm, p: Point3) -> Result<(GradedForm, GradedForm)> {
    if x.homogeneous_grade().is_none() {
        return Err(Error::NotHomogeneous);
    }
    let pf = GradedForm::point(p);
    Ok((pf.wedge(&x.omega()), pf.wedge(x).omega()))
}

/// Equality of two forms of grade `r` tested through the pairing with every
/// basis monomial of grade `4 − r`.
///
/// `tol` is relative to the larger of the two coefficient norms.
pub fn pair_equal(a: &GradedForm, b: &GradedForm, tol: f64) -> Result<bool> {
    let ga = a.homogeneous_grade().ok_or(Error::NotHomogeneous)?;
    let gb = b.homogeneous_grade().ok_or(Error::NotHomogeneous)?;
    let grade = match (a.is_zero(), b.is_zero()) {
        (true, true) => return Ok(true),
        (true, false) => gb,
        (false, true) => ga,
        (false, false) if ga == gb => ga,
        (false, false) => return Err(Error::GradeMismatch { left: ga, right: gb }),
    };
    let diff = *a - *b;
    let bound = tol * a.norm().max(b.norm());
    Ok(BASIS
        .iter()
        .filter(|&&m| grade_of(m as usize) == 4 - grade)
        .all(|&m| diff.wedge(&GradedForm::monomial(m)).top().abs() <= bound))
}

/// Three points `X, Y, Z` with `(Y − X) ∧ (Z − X) = b`.
///
/// The frame is deterministic: with `n` the unit normal of `b` and `a` the
/// coordinate axis least parallel to `n` (lowest index on ties),
/// `û = n × a / |n × a|`, `v̂ = n × û`, and both legs have length `√|b|`.
pub fn bivector_to_triangle(b: BiVector, x: Point3) -> Result<(Point3, Point3, Point3)> {
    let mag = b.magnitude();
    if mag == 0.0 || !mag.is_finite() {
        return Err(Error::DegenerateBivector);
    }
    let n = b.normal() * (1.0 / mag);
    let comps = [n.x.abs(), n.y.abs(), n.z.abs()];
    let mut axis = 0;
    for i in 1..3 {
        if comps[i] < comps[axis] {
            axis = i;
        }
    }
    let a = [Vector3::X, Vector3::Y, Vector3::Z][axis];
    let u = n.cross(a).normalized().ok_or(Error::DegenerateBivector)?;
    let v = n.cross(u);
    let leg = mag.sqrt();
    Ok((x, x + u * leg, x + v * leg))
}

/// Parallel projection of `p` along `dir` onto the plane through the origin
/// with normal `normal`.
pub fn project_point(p: Point3, normal: Vector3, dir: Vector3) -> Point3 {
    let c = p.coords();
    let s = c.dot(normal) / dir.dot(normal);
    Point3::ORIGIN + (c - dir * s)
}

/// The map induced on `Λ²(V)` by the parallel projection of [`project_point`].
///
/// Every projected bi-vector lies in the target plane, so it is a multiple of
/// the plane's normal; the multiple is fixed by `(Πa ∧ Πb) ∧ d = (a ∧ b) ∧ d`.
pub fn project_bivector(b: BiVector, normal: Vector3, dir: Vector3) -> BiVector {
    let s = b.normal().dot(dir) / dir.dot(normal);
    BiVector::from_normal(normal * s)
}
