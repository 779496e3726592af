//! End-to-end acceptance suite. Prints one line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gparea::area_est::{
    borchardt_area, cell_values, geocze_area, infinitesimal_ratio, lagrange_area, lantern_area_closed_form,
    mesh_area, outer_boundary, peano_bivector_area, peano_geometric_area, schwarz_lantern, CellRule,
    ParametricSurface, DEFAULT_DIRS, DEFAULT_K,
};
use gparea::curves::{curve_bivector_auto, ParamCurve};
use gparea::exterior::{pair_equal, reduce, wedge_all, GradedForm, Point3, Vector3, BASIS};
use gparea::polytope::shapes::icosphere;
use gparea::polytope::{mesh_volume, polygon_area_from_base, polygon_area_signed, Polygon3, TriMesh};
use gparea::sum::pairwise_sum;
use gparea::sweep::{cycloid_sector_area, sweep_area, tangent_cluster_area, SegmentMotion};
use gparea::winding::{abs_winding_area, abs_winding_area_mc, abs_winding_area_of, signed_area, PlanarPolyline};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

struct Criterion {
    id: usize,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "lantern closed form", budget: Some(Duration::from_secs(10)), run: lantern_closed_form },
        Criterion { id: 2, name: "lantern limits", budget: Some(Duration::from_secs(1)), run: lantern_limits },
        Criterion { id: 3, name: "helix bivector", budget: Some(Duration::from_secs(1)), run: helix_bivector },
        Criterion { id: 4, name: "smooth-surface area equality", budget: Some(Duration::from_secs(60)), run: smooth_equality },
        Criterion { id: 5, name: "algebra laws", budget: Some(Duration::from_secs(5)), run: algebra_laws },
        Criterion { id: 6, name: "base-point independence", budget: None, run: base_point },
        Criterion { id: 7, name: "winding oracle", budget: None, run: winding_oracle },
        Criterion { id: 8, name: "borchardt sphere", budget: None, run: borchardt_sphere },
        Criterion { id: 9, name: "mamikon and cycloid", budget: None, run: mamikon },
        Criterion { id: 10, name: "infinitesimal ratio", budget: None, run: infinitesimal },
        Criterion { id: 11, name: "area axioms", budget: None, run: axioms },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run))
            .unwrap_or_else(|e| Err(format!("panicked: {:?}", e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())))));
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.budget) {
            (Ok(detail), Some(b)) if elapsed > b => Err(format!("{detail}; took longer than {b:?}")),
            (o, _) => o,
        };
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} [{:>2}] {}: {detail} ({:.2} s)", c.id, c.name, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn lantern_closed_form() -> Outcome {
    let mut worst: f64 = 0.0;
    for m in 3..=64 {
        for n in 1..=64 {
            let a = mesh_area(&schwarz_lantern(m, n).map_err(|e| e.to_string())?);
            let r = rel(a, lantern_area_closed_form(m, n));
            ensure(r <= 1e-9, || format!("m={m} n={n}: rel error {r:e}"))?;
            worst = worst.max(r);
        }
    }
    Ok(format!("3968 lanterns, worst rel error {worst:.2e}"))
}

fn lantern_limits() -> Outcome {
    let a = lantern_area_closed_form(1024, 1024);
    let r1 = rel(a, 2.0 * PI);
    ensure(r1 <= 1e-4, || format!("a(1024,1024) = {a}, rel {r1:e}"))?;
    let b = lantern_area_closed_form(512, 512 * 512);
    let lim = 2.0 * PI * (1.0 + PI.powi(4) / 4.0).sqrt();
    let r2 = rel(b, lim);
    ensure(r2 <= 1e-2, || format!("a(512,512²) = {b}, rel {r2:e}"))?;
    let mut prev = 0.0;
    for m in 3..=100usize {
        let v = lantern_area_closed_form(m, m * m * m);
        ensure(v > prev, || format!("a(m,m³) not increasing at m={m}"))?;
        prev = v;
    }
    ensure(prev > 1000.0, || format!("a(100,100³) = {prev}"))?;
    Ok(format!("rel {r1:.1e} to 2π, rel {r2:.1e} to 2π√(1+π⁴/4), a(100,100³) = {prev:.1}"))
}

fn helix_bivector() -> Outcome {
    let c = ParamCurve::helix(1.0, 1.0).map_err(|e| e.to_string())?;
    let auto = curve_bivector_auto(&c, 1e-7).map_err(|e| e.to_string())?;
    let b = auto.bivector;
    let err = b.yz.abs().max(b.zx.abs()).max((b.xy - 2.0 * PI).abs());
    ensure(err <= 1e-6, || format!("{b:?}, error {err:e}"))?;
    Ok(format!("n = {}, max error {err:.1e}", auto.n))
}

fn smooth_equality() -> Outcome {
    let suite = [
        ("flat", ParametricSurface::flat()),
        ("z=xy", ParametricSurface::graph("x * y", [0.0, 1.0], [0.0, 1.0]).unwrap()),
        ("cylinder", ParametricSurface::cylinder(1.0, 1.0).unwrap()),
        ("octant", ParametricSurface::sphere_octant(1.0).unwrap()),
    ];
    let mut worst: f64 = 0.0;
    for (name, s) in &suite {
        let l = lagrange_area(s, 512).map_err(|e| e.to_string())?.value;
        let ests = [
            peano_bivector_area(s, 7, 1e-3),
            geocze_area(s, 7, 1e-3),
            peano_geometric_area(s, 7, DEFAULT_DIRS),
        ];
        for e in ests {
            let e = e.map_err(|e| e.to_string())?;
            let r = rel(e.value, l);
            ensure(r <= 5e-3, || format!("{name} {}: {} vs {l} (rel {r:e})", e.method.name(), e.value))?;
            worst = worst.max(r);
        }
    }
    Ok(format!("worst rel deviation from lagrange {worst:.2e}"))
}

fn random_form(rng: &mut ChaCha8Rng, grade: Option<usize>) -> GradedForm {
    let mut f = GradedForm::default();
    for &m in &BASIS {
        if grade.is_none_or(|g| m.count_ones() as usize == g) {
            f.set_coeff(m, rng.random_range(-2.0..2.0));
        }
    }
    f
}

fn random_point(rng: &mut ChaCha8Rng, r: f64) -> Point3 {
    Point3::new(rng.random_range(-r..r), rng.random_range(-r..r), rng.random_range(-r..r))
}

fn algebra_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let checks = 10_000;
    let close = |a: &GradedForm, b: &GradedForm| (*a - *b).max_abs() <= 1e-10 * a.max_abs().max(b.max_abs()).max(1.0);
    for i in 0..checks {
        let (r, s) = (rng.random_range(0..=4usize), rng.random_range(0..=4usize));
        let (a, b, c) = (random_form(&mut rng, Some(r)), random_form(&mut rng, Some(s)), random_form(&mut rng, None));
        let sign = if (r * s) % 2 == 0 { 1.0 } else { -1.0 };
        ensure(close(&a.wedge(&b), &(b.wedge(&a) * sign)), || format!("anticommutativity #{i}"))?;
        ensure(close(&a.wedge(&b).wedge(&c), &a.wedge(&b.wedge(&c))), || format!("associativity #{i}"))?;
        let leibniz = a.omega().wedge(&c) + a.wedge(&c.omega()) * if r % 2 == 0 { 1.0 } else { -1.0 };
        ensure(close(&a.wedge(&c).omega(), &leibniz), || format!("Leibniz #{i}"))?;
        ensure(c.omega().omega().max_abs() <= 1e-10 * c.max_abs(), || format!("ω∘ω #{i}"))?;
        let p = random_point(&mut rng, 5.0);
        let (moved, couple) = reduce(&a, p).map_err(|e| e.to_string())?;
        let scale = a.max_abs() * (1.0 + p.coords().norm()).powi(2);
        ensure((moved + couple - a).max_abs() <= 1e-10 * scale, || format!("reduction #{i}"))?;
        let twin = a + a * 1e-14;
        ensure(pair_equal(&a, &twin, 1e-10).map_err(|e| e.to_string())?, || format!("pairing equal #{i}"))?;
        let other = random_form(&mut rng, Some(r));
        let pe = pair_equal(&a, &other, 1e-10).map_err(|e| e.to_string())?;
        ensure(pe == close(&a, &other), || format!("pairing distinct #{i}"))?;
        let tet = |rng: &mut ChaCha8Rng| [0; 4].map(|_| random_point(rng, 3.0));
        let (t1, t2) = (tet(&mut rng), tet(&mut rng));
        let q = |t: [Point3; 4]| wedge_all(t.map(GradedForm::point).iter()).top();
        let det = |t: [Point3; 4]| (t[1] - t[0]).dot((t[2] - t[0]).cross(t[3] - t[0]));
        if det(t1).abs() > 1e-3 {
            let (got, want) = (q(t2) / q(t1), det(t2) / det(t1));
            ensure((got - want).abs() <= 1e-10 * want.abs().max(1.0), || format!("determinant ratio #{i}"))?;
        }
    }
    Ok(format!("{checks} rounds of 8 laws"))
}

fn base_point() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        // random polygon in a random plane
        let n = Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            .normalized()
            .unwrap();
        let u = n.cross(Vector3::X).normalized().unwrap_or(Vector3::Y);
        let v = n.cross(u);
        let o = random_point(&mut rng, 5.0);
        let k = rng.random_range(3..12);
        let pts = (0..k).map(|_| o + u * rng.random_range(-3.0..3.0) + v * rng.random_range(-3.0..3.0)).collect();
        let poly = Polygon3::new(pts).map_err(|e| e.to_string())?;
        let area = polygon_area_signed(&poly, n).map_err(|e| e.to_string())?;
        let scale = area.abs().max(poly.bbox_diagonal().powi(2) * 1e-3);
        for _ in 0..100 {
            let p = random_point(&mut rng, 10.0);
            let a = polygon_area_from_base(&poly, n, p).map_err(|e| e.to_string())?;
            let r = (a - area).abs() / scale;
            ensure(r <= 1e-10, || format!("polygon area moved by {r:e}"))?;
            worst = worst.max(r);
        }
        // random star-shaped closed mesh
        let base = icosphere(1);
        let verts = base
            .vertices()
            .iter()
            .map(|p| o + p.coords() * rng.random_range(0.5..2.0))
            .collect();
        let mesh = TriMesh::new(verts, base.triangles().to_vec()).map_err(|e| e.to_string())?;
        let vol = mesh_volume(&mesh, Point3::ORIGIN).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let p = random_point(&mut rng, 10.0);
            let w = mesh_volume(&mesh, p).map_err(|e| e.to_string())?;
            let r = rel(w, vol);
            ensure(r <= 1e-10, || format!("volume moved by {r:e}"))?;
            worst = worst.max(r);
        }
    }
    Ok(format!("20 polygons and 20 meshes x 100 base points, worst rel {worst:.1e}"))
}

fn self_intersects(pts: &[[f64; 2]]) -> bool {
    let n = pts.len();
    let orient = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (a, b, c, d) = (pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]);
            if orient(a, b, c) * orient(a, b, d) < 0.0 && orient(c, d, a) * orient(c, d, b) < 0.0 {
                return true;
            }
        }
    }
    false
}

fn winding_oracle() -> Outcome {
    let exact = |pts: Vec<[f64; 2]>| PlanarPolyline::new(pts).map_err(|e| e.to_string());
    let square = exact(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])?;
    ensure(abs_winding_area(&square) == 1.0, || "square".into())?;
    let twice = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]].repeat(2);
    let d = abs_winding_area_of(&twice);
    ensure(d == 2.0, || format!("doubly traversed square gave {d}"))?;
    let eight = exact(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [1.0, 2.0], [2.0, 2.0], [2.0, 1.0], [1.0, 1.0], [0.0, 1.0]])?;
    ensure(signed_area(&eight) == 0.0 && abs_winding_area(&eight) == 2.0, || "figure-eight".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 20 {
        let k = rng.random_range(5..10);
        let pts: Vec<[f64; 2]> = (0..k).map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]).collect();
        if !self_intersects(&pts) {
            continue;
        }
        let poly = exact(pts)?;
        let a = abs_winding_area(&poly);
        let (mc, se) = abs_winding_area_mc(&poly, 1_000_000, done as u64);
        let z = (mc - a).abs() / se;
        ensure(z <= 3.0, || format!("polyline {done}: {a} vs {mc} ± {se} ({z:.2}σ)"))?;
        worst = worst.max(z);
        done += 1;
    }
    Ok(format!("fixtures exact, 20 self-intersecting polylines within {worst:.2}σ"))
}

fn borchardt_sphere() -> Outcome {
    let mesh = icosphere(5);
    let b = borchardt_area(&mesh, 0.01, 10_000_000, 0).map_err(|e| e.to_string())?;
    let truth = 4.0 * PI;
    let r = rel(b.value, truth);
    ensure(r <= 0.05, || format!("{} vs 4π", b.value))?;
    let z = (b.value - truth).abs() / b.std_error;
    ensure(z <= 3.0, || format!("{} ± {} misses 4π by {z:.2}σ", b.value, b.std_error))?;
    Ok(format!("{:.5} ± {:.5} (rel {r:.1e}, {z:.2}σ)", b.value, b.std_error))
}

fn mamikon() -> Outcome {
    let mo = SegmentMotion::circle_tangents(1.0, 1.0).map_err(|e| e.to_string())?;
    let s = sweep_area(&mo, 4096).map_err(|e| e.to_string())?;
    let c = tangent_cluster_area(&mo, 4096).map_err(|e| e.to_string())?;
    let r1 = rel(s, c);
    ensure(r1 <= 1e-5, || format!("sweep {s} vs cluster {c}"))?;
    let cyc = cycloid_sector_area(1.0, 4096).map_err(|e| e.to_string())?;
    let r2 = rel(cyc, 3.0 * PI);
    ensure(r2 <= 1e-5, || format!("cycloid {cyc} vs 3π"))?;
    Ok(format!("sweep/cluster rel {r1:.1e}, cycloid rel {r2:.1e}"))
}

fn infinitesimal() -> Outcome {
    let s = ParametricSurface::graph("x * y", [0.0, 1.0], [0.0, 1.0]).map_err(|e| e.to_string())?;
    let pts: Vec<(f64, f64)> = (3..=9)
        .map(|k| {
            let eps = 0.5f64.powi(k);
            let r = infinitesimal_ratio(&s, (0.3, 0.4), eps, DEFAULT_K, 16).unwrap();
            (eps.ln(), (r - 1.0).abs().ln())
        })
        .collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    ensure(slope >= 1.5, || format!("slope {slope:.3}"))?;
    Ok(format!("log-log slope {slope:.3}"))
}

fn axioms() -> Outcome {
    let e = |e: gparea::Error| e.to_string();
    // elementary area on polyhedral inputs
    let roof = ParametricSurface::graph("abs(x - 0.5)", [0.0, 1.0], [0.0, 1.0]).map_err(e)?;
    let slab = ParametricSurface::rect(["2 * u + v", "u - v", "3 * u"], [0.0, 1.0], [0.0, 1.0]).map_err(e)?;
    for (s, want) in [(&roof, 2f64.sqrt()), (&slab, 27f64.sqrt())] {
        for v in [
            peano_bivector_area(s, 5, 1e-3).map_err(e)?.value,
            geocze_area(s, 5, 1e-3).map_err(e)?.value,
            peano_geometric_area(s, 4, DEFAULT_DIRS).map_err(e)?.value,
        ] {
            ensure(rel(v, want) <= 1e-9, || format!("polyhedral: {v} vs {want}"))?;
        }
    }
    let suite = [
        ParametricSurface::flat(),
        ParametricSurface::graph("x * y", [0.0, 1.0], [0.0, 1.0]).map_err(e)?,
        ParametricSurface::cylinder(1.0, 1.0).map_err(e)?,
        ParametricSurface::sphere_octant(1.0).map_err(e)?,
        roof,
        slab,
    ];
    let rules = [CellRule::Bivector, CellRule::Geocze, CellRule::Geometric { n_dirs: DEFAULT_DIRS }];
    let mut worst_split = f64::NEG_INFINITY;
    for s in &suite {
        // super-additivity at matched refinement
        let (l, r) = s.split_s().map_err(e)?;
        for rule in rules {
            let whole = pairwise_sum(&cell_values(s, 16, 16, DEFAULT_K, rule).map_err(e)?);
            let halves = pairwise_sum(&cell_values(&l, 8, 16, DEFAULT_K, rule).map_err(e)?)
                + pairwise_sum(&cell_values(&r, 8, 16, DEFAULT_K, rule).map_err(e)?);
            ensure(halves <= whole + 1e-9, || format!("split {rule:?}: {halves} > {whole}"))?;
            worst_split = worst_split.max(halves - whole);
        }
        // Peano inequality against the three coordinate projections
        let boundary = outer_boundary(s, 256).map_err(e)?;
        let values = [
            lagrange_area(s, 256).map_err(e)?.value,
            peano_bivector_area(s, 6, 1e-3).map_err(e)?.value,
            geocze_area(s, 6, 1e-3).map_err(e)?.value,
            peano_geometric_area(s, 5, DEFAULT_DIRS).map_err(e)?.value,
        ];
        for (a, b) in [(1, 2), (2, 0), (0, 1)] {
            let proj: Vec<[f64; 2]> = boundary.iter().map(|p| [p.to_array()[a], p.to_array()[b]]).collect();
            let floor = abs_winding_area_of(&proj);
            for v in values {
                ensure(v >= floor - 1e-9, || format!("Peano inequality: {v} < {floor}"))?;
            }
        }
    }
    Ok(format!("polyhedral exact, split excess {worst_split:.1e}, Peano inequality on {} surfaces", suite.len()))
}
