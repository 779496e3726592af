#![allow(dead_code)]

use gparea::exterior::{GradedForm, Point3, Vector3, BASIS};
use proptest::prelude::*;

pub fn coord() -> impl Strategy<Value = f64> {
    -10.0..10.0f64
}

pub fn point() -> impl Strategy<Value = Point3> {
    (coord(), coord(), coord()).prop_map(|(x, y, z)| Point3::new(x, y, z))
}

pub fn vector() -> impl Strategy<Value = Vector3> {
    (coord(), coord(), coord()).prop_map(|(x, y, z)| Vector3::new(x, y, z))
}

pub fn grade_of(mask: u8) -> usize {
    mask.count_ones() as usize
}

/// Random form with nonzero coefficients only in grade `k`.
pub fn homogeneous(k: usize) -> impl Strategy<Value = GradedForm> {
    prop::collection::vec(-3.0..3.0f64, 16).prop_map(move |c| {
        let mut f = GradedForm::default();
        for (i, &m) in BASIS.iter().enumerate() {
            if grade_of(m) == k {
                f.set_coeff(m, c[i]);
            }
        }
        f
    })
}

pub fn graded() -> impl Strategy<Value = (usize, GradedForm)> {
    (0usize..=4).prop_flat_map(|k| homogeneous(k).prop_map(move |f| (k, f)))
}

pub fn any_form() -> impl Strategy<Value = GradedForm> {
    prop::collection::vec(-3.0..3.0f64, 16).prop_map(|c| {
        let mut f = GradedForm::default();
        for (i, &m) in BASIS.iter().enumerate() {
            f.set_coeff(m, c[i]);
        }
        f
    })
}

/// Maximum coefficient difference relative to the larger operand.
pub fn rel_diff(a: &GradedForm, b: &GradedForm) -> f64 {
    let scale = a.max_abs().max(b.max_abs()).max(1.0);
    (*a - *b).max_abs() / scale
}

/// Wedge product computed from index lists and an explicit permutation
/// parity, without bitmask tricks.
pub fn naive_wedge(a: &GradedForm, b: &GradedForm) -> GradedForm {
    let mut out = GradedForm::default();
    for &ma in &BASIS {
        for &mb in &BASIS {
            let (ca, cb) = (a.coeff(ma), b.coeff(mb));
            if ca == 0.0 || cb == 0.0 || ma & mb != 0 {
                continue;
            }
            let mut idx: Vec<u8> = (0..4).filter(|i| ma >> i & 1 == 1).collect();
            idx.extend((0..4).filter(|i| mb >> i & 1 == 1));
            // bubble sort, counting transpositions
            let mut swaps = 0;
            for i in 0..idx.len() {
                for j in 0..idx.len() - 1 - i {
                    if idx[j] > idx[j + 1] {
                        idx.swap(j, j + 1);
                        swaps += 1;
                    }
                }
            }
            let sign = if swaps % 2 == 0 { 1.0 } else { -1.0 };
            let m = ma | mb;
            out.set_coeff(m, out.coeff(m) + sign * ca * cb);
        }
    }
    out
}

/// 4×4 determinant by cofactor expansion.
pub fn det4(m: [[f64; 4]; 4]) -> f64 {
    let minor = |col: usize| {
        let mut r = [[0.0; 3]; 3];
        for (i, row) in r.iter_mut().enumerate() {
            let kept = m[i + 1].iter().enumerate().filter(|&(j, _)| j != col).map(|(_, &x)| x);
            for (slot, x) in row.iter_mut().zip(kept) {
                *slot = x;
            }
        }
        r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
    };
    (0..4).map(|c| if c % 2 == 0 { 1.0 } else { -1.0 } * m[0][c] * minor(c)).sum()
}

/// Twice the signed area of a planar loop by the shoelace formula.
pub fn shoelace2(pts: &[[f64; 2]]) -> f64 {
    let n = pts.len();
    (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum()
}
