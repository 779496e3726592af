mod common;

use std::f64::consts::PI;

use common::*;
use gparea::area_est::{infinitesimal_ratio, ParametricSurface, DEFAULT_K};
use gparea::curves::{curve_bivector, project_curve, ParamCurve};
use gparea::exterior::{project_bivector, BiVector, Point3, Vector3};
use proptest::prelude::*;

/// Random closed trigonometric curve of degree 2 on `[0, 2π]`.
fn trig_curve() -> impl Strategy<Value = ParamCurve> {
    prop::collection::vec(-2.0..2.0f64, 12).prop_map(|c| {
        let comp = |k: usize| {
            format!(
                "{} * cos(t) + {} * sin(t) + {} * cos(2 * t) + {} * sin(2 * t)",
                c[4 * k], c[4 * k + 1], c[4 * k + 2], c[4 * k + 3]
            )
            .replace("+ -", "- ")
        };
        let [x, y, z] = [comp(0), comp(1), comp(2)];
        ParamCurve::dsl([&x, &y, &z], 0.0, 2.0 * PI, vec![], true).unwrap()
    })
}

fn unit() -> impl Strategy<Value = Vector3> {
    vector().prop_filter_map("short", |v| if v.norm() > 0.1 { v.normalized() } else { None })
}

fn chord_sum_about(c: &ParamCurve, n: usize, o: Point3) -> BiVector {
    let ts = c.partition(n);
    let pts: Vec<Point3> = ts.iter().map(|&t| c.eval(t).unwrap()).collect();
    let mut b = BiVector::ZERO;
    for w in pts.windows(2) {
        b += (w[0] - o).wedge(w[1] - o);
    }
    b
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn projection_commutes_with_bivector(
        c in trig_curve(),
        planes in prop::collection::vec((unit(), unit()), 10),
    ) {
        let b = curve_bivector(&c, 8192).unwrap();
        for (n, d) in planes {
            prop_assume!(n.dot(d).abs() > 0.2);
            let projected = curve_bivector(&project_curve(&c, n, d).unwrap(), 8192).unwrap();
            let want = project_bivector(b, n, d);
            let scale = want.magnitude().max(b.magnitude()).max(1e-3);
            prop_assert!(projected.max_abs_diff(want) <= 1e-6 * scale, "{projected:?} vs {want:?}");
        }
    }

    #[test]
    fn chord_sum_ignores_the_origin(c in trig_curve(), origins in prop::collection::vec(point(), 10)) {
        let b = curve_bivector(&c, 1024).unwrap();
        for o in origins {
            let about = chord_sum_about(&c, 1024, o);
            prop_assert!(about.max_abs_diff(b) <= 1e-12 * 100.0 * (1.0 + o.coords().norm()).powi(2));
        }
    }

    #[test]
    fn translation_leaves_bivector_unchanged(c in trig_curve(), t in vector()) {
        let a = curve_bivector(&c, 2048).unwrap();
        let b = curve_bivector(&c.translated(t), 2048).unwrap();
        prop_assert!(a.max_abs_diff(b) <= 1e-11 * (1.0 + t.norm()).powi(2));
    }
}

#[test]
fn lobes_of_a_figure_eight_add_up() {
    let e = ["sin(t)", "sin(t) * cos(t)", "0.3 * sin(2 * t)"];
    let whole = ParamCurve::dsl(e, 0.0, 2.0 * PI, vec![PI], true).unwrap();
    let lobe1 = ParamCurve::dsl(e, 0.0, PI, vec![], true).unwrap();
    let lobe2 = ParamCurve::dsl(e, PI, 2.0 * PI, vec![], true).unwrap();
    let n = 4096;
    let sum = curve_bivector(&lobe1, n / 2).unwrap() + curve_bivector(&lobe2, n / 2).unwrap();
    let b = curve_bivector(&whole, n).unwrap();
    assert!(sum.max_abs_diff(b) < 1e-13, "{sum:?} vs {b:?}");
    // the lobes turn in opposite senses
    let l1 = curve_bivector(&lobe1, n).unwrap();
    assert!(l1.xy.abs() > 0.1 && (l1.xy + curve_bivector(&lobe2, n).unwrap().xy).abs() < 1e-12);
}

#[test]
fn back_and_forth_seam_adds_nothing() {
    // two squares joined by a seam walked out and back
    let sq = |o: [f64; 2], s: f64| {
        vec![
            Point3::new(o[0], o[1], 0.0),
            Point3::new(o[0] + s, o[1], 0.0),
            Point3::new(o[0] + s, o[1] + s, 0.0),
            Point3::new(o[0], o[1] + s, 0.0),
        ]
    };
    let a = sq([0.0, 0.0], 1.0);
    let b = sq([3.0, 1.0], 0.5);
    let mut joined = a.clone();
    joined.push(a[0]);
    joined.extend(b.iter().copied());
    joined.push(b[0]);
    let ca = ParamCurve::polyline(a).unwrap();
    let cb = ParamCurve::polyline(b).unwrap();
    let cj = ParamCurve::polyline(joined).unwrap();
    let sum = curve_bivector(&ca, 64).unwrap() + curve_bivector(&cb, 64).unwrap();
    let whole = curve_bivector(&cj, 128).unwrap();
    assert!(sum.max_abs_diff(whole) < 1e-14);
    assert!((whole.xy - 2.0 * 1.25).abs() < 1e-14);
}

#[test]
fn infinitesimal_ratio_converges_quadratically_on_saddle() {
    let s = ParametricSurface::graph("x * y", [0.0, 1.0], [0.0, 1.0]).unwrap();
    let at = (0.3, 0.4);
    let mut pts = Vec::new();
    let mut last = f64::INFINITY;
    for k in 3..=9 {
        let eps = 0.5f64.powi(k);
        let r = infinitesimal_ratio(&s, at, eps, DEFAULT_K, 16).unwrap();
        let err = (r - 1.0).abs();
        assert!(r <= 1.0 + 1e-12, "ratio {r} above 1");
        assert!(err < last, "error did not shrink at eps = {eps}");
        last = err;
        pts.push((eps.ln(), err.ln()));
    }
    let slope = least_squares_slope(&pts);
    assert!(slope >= 1.5, "slope {slope}");
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
