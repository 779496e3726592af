use gparea::area_est::ParametricSurface;
use gparea::surfdsl::parse_expr;
use proptest::prelude::*;

/// Expression tree used to generate source text with known values.
#[derive(Debug, Clone)]
enum T {
    Num(f64),
    Var(usize),
    Neg(Box<T>),
    Bin(char, Box<T>, Box<T>),
    Call(&'static str, Box<T>),
}

impl T {
    fn text(&self) -> String {
        match self {
            T::Num(x) => format!("{x}"),
            T::Var(i) => ["u", "v"][*i].to_string(),
            T::Neg(a) => format!("(-({}))", a.text()),
            T::Bin(op, a, b) => format!("({} {op} {})", a.text(), b.text()),
            T::Call(f, a) => format!("{f}({})", a.text()),
        }
    }

    fn eval(&self, env: [f64; 2]) -> f64 {
        match self {
            T::Num(x) => *x,
            T::Var(i) => env[*i],
            T::Neg(a) => -a.eval(env),
            T::Bin(op, a, b) => {
                let (x, y) = (a.eval(env), b.eval(env));
                match op {
                    '+' => x + y,
                    '-' => x - y,
                    '*' => x * y,
                    '/' => x / y,
                    _ => x.powf(y),
                }
            }
            T::Call(f, a) => {
                let x = a.eval(env);
                match *f {
                    "sin" => x.sin(),
                    "cos" => x.cos(),
                    "exp" => x.exp(),
                    "sqrt" => x.sqrt(),
                    _ => x.abs(),
                }
            }
        }
    }
}

fn tree() -> impl Strategy<Value = T> {
    let leaf = prop_oneof![
        (0.0..10.0f64).prop_map(|x| T::Num((x * 1000.0).round() / 1000.0)),
        (0usize..2).prop_map(T::Var),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| T::Neg(Box::new(a))),
            (prop::sample::select(vec!['+', '-', '*', '/', '^']), inner.clone(), inner.clone())
                .prop_map(|(op, a, b)| T::Bin(op, Box::new(a), Box::new(b))),
            (prop::sample::select(vec!["sin", "cos", "exp", "sqrt", "abs"]), inner)
                .prop_map(|(f, a)| T::Call(f, Box::new(a))),
        ]
    })
}

fn same(a: f64, b: f64) -> bool {
    (a.is_nan() && b.is_nan()) || a == b || (a - b).abs() <= 1e-15 * a.abs().max(b.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn parse_print_reparse(t in tree(), pts in prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 100)) {
        let src = t.text();
        let e = parse_expr(&src, &["u", "v"]).unwrap();
        let printed = e.to_string();
        let again = parse_expr(&printed, &["u", "v"]).unwrap();
        for (u, v) in pts {
            let want = t.eval([u, v]);
            match (e.eval(&[u, v]), again.eval(&[u, v])) {
                (Ok(a), Ok(b)) => {
                    prop_assert!(same(a, b), "{src} -> {printed}: {a} vs {b}");
                    prop_assert!(same(a, want), "{src}: {a} vs oracle {want}");
                }
                // domain errors stand in for values that are not finite
                (Err(_), Err(_)) => prop_assert!(!want.is_finite(), "{src}: rejected but oracle gives {want}"),
                (a, b) => prop_assert!(false, "{src} -> {printed}: {a:?} vs {b:?}"),
            }
        }
    }
}

#[test]
fn surface_jets_match_central_differences() {
    let catalog = [
        ParametricSurface::flat(),
        ParametricSurface::cylinder(1.5, 2.0).unwrap(),
        ParametricSurface::sphere(1.0).unwrap(),
        ParametricSurface::sphere_octant(2.0).unwrap(),
        ParametricSurface::graph("x * y", [0.0, 1.0], [0.0, 1.0]).unwrap(),
        ParametricSurface::graph("exp(-x^2) * sin(3 * y)", [-1.0, 1.0], [0.0, 2.0]).unwrap(),
        ParametricSurface::region(["u", "v", "sqrt(1 + u * v)"], [0.0, 1.0], "u * u", "1 + u").unwrap(),
    ];
    let h = 1e-6;
    for (idx, s) in catalog.iter().enumerate() {
        for i in 1..8 {
            for j in 1..8 {
                let (a, b) = (i as f64 / 8.0, j as f64 / 8.0);
                let (_, ds, dt) = s.jet(a, b).unwrap();
                let fd_s = (s.point(a + h, b).unwrap() - s.point(a - h, b).unwrap()) * (0.5 / h);
                let fd_t = (s.point(a, b + h).unwrap() - s.point(a, b - h).unwrap()) * (0.5 / h);
                let err = (ds - fd_s).norm().max((dt - fd_t).norm());
                assert!(err <= 1e-6 * ds.norm().max(dt.norm()).max(1.0), "surface {idx} at ({a}, {b}): {err}");
            }
        }
    }
}
