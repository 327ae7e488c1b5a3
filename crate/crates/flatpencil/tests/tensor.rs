use flatpencil::expr::{RationalExpr, Symbols};
use flatpencil::tensor::*;

fn e(s: &str) -> RationalExpr {
    Symbols::open().parse(s).unwrap()
}

fn mat(rows: &[&[&str]]) -> Matrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|x| e(x)).collect()).collect())
}

fn round_metric(n: usize) -> MetricField {
    let chart = Chart::numbered("x", "x", n);
    let q: Vec<String> = (1..=n).map(|i| format!("x{i}^2")).collect();
    let omega = e(&format!("1/(c*({}) + d)", q.join("+")));
    conformal_rescale(&MetricField::euclidean(&chart), &omega).unwrap()
}

#[test]
fn euclidean_is_flat() {
    let chart = Chart::numbered("x", "x", 3);
    let g = MetricField::euclidean(&chart);
    assert!(christoffel(&g).is_zero());
    assert_eq!(constant_sectional_curvature(&g), Some(RationalExpr::zero()));
}

#[test]
fn polar_plane() {
    let chart = Chart::new("polar", &["x1", "x2"]).unwrap();
    let g = MetricField::covariant(&chart, mat(&[&["1", "0"], &["0", "x1^2"]])).unwrap();
    let gamma = christoffel(&g);
    assert_eq!(*gamma.get(0, 1, 1), e("-x1"));
    assert_eq!(*gamma.get(1, 0, 1), e("1/x1"));
    assert_eq!(*gamma.get(1, 1, 0), e("1/x1"));
    assert!(gamma.get(0, 0, 0).is_zero() && gamma.get(1, 1, 1).is_zero() && gamma.get(0, 0, 1).is_zero());
    assert!(riemann(&gamma).is_zero());
    assert!(gamma.metric_defect(&g).is_ok());
}

#[test]
fn non_constant_curvature_detected() {
    let chart = Chart::new("c", &["x1", "x2"]).unwrap();
    let g = MetricField::covariant(&chart, mat(&[&["1", "0"], &["0", "x1^3"]])).unwrap();
    assert_eq!(constant_sectional_curvature(&g), None);
}

#[test]
fn round_metric_curvature_is_4cd() {
    for n in 2..=4 {
        let g = round_metric(n);
        let t = std::time::Instant::now();
        let gamma = christoffel(&g);
        assert!(gamma.metric_defect(&g).is_ok());
        let r = riemann(&gamma);
        assert!(r.antisymmetry().is_ok());
        assert!(r.first_bianchi().is_ok());
        let low = r.lowered(&g);
        assert!(low.pair_symmetry().is_ok());
        assert_eq!(sectional_constant(&low, &g), Some(e("4*c*d")), "n = {n}");
        eprintln!("n = {n}: {:?}", t.elapsed());
    }
}

#[test]
fn lie_derivative_of_antidiagonal_metric() {
    // degrees 3, 2 of I2(3): h + 2 = 5
    let chart = Chart::new("t", &["t1", "t2"]).unwrap();
    let g = MetricField::covariant(&chart, Matrix::antidiagonal(2)).unwrap();
    let euler = VectorField::euler(&chart, &[e("3"), e("2")]);
    assert_eq!(conformal_factor(&euler, &g).unwrap(), Some(e("5")));
    let rep = lie_derivative_connection(&euler, &g).unwrap();
    assert!(rep.passed(), "{rep}");
}

#[test]
fn remark_pair_factors() {
    let chart = Chart::new("p", &["x", "y"]).unwrap();
    let h = MetricField::contravariant(&chart, mat(&[&["0", "x"], &["x", "y"]])).unwrap();
    let ht = MetricField::contravariant(&chart, mat(&[&["0", "1+x"], &["1+x", "0"]])).unwrap();
    let euler = VectorField::euler(&chart, &[e("1"), e("1")]);
    assert_eq!(conformal_factor(&euler, &h).unwrap(), Some(e("1")));
    assert_eq!(conformal_factor(&euler, &ht).unwrap(), Some(e("2 - x/(1+x)")));
    assert!(lie_derivative_connection(&euler, &ht).unwrap().passed());
}

#[test]
fn conformal_connection_formula() {
    let chart = Chart::new("p", &["x", "y"]).unwrap();
    let g = MetricField::contravariant(&chart, mat(&[&["0", "x"], &["x", "y"]])).unwrap();
    let gt = MetricField::covariant(&chart, Matrix::antidiagonal(2)).unwrap();
    let rep = scaled_connection_difference(&g, &gt, &e("x^2 + 3*y - 1")).unwrap();
    assert!(rep.passed(), "{rep}");
}

#[test]
fn conformal_scaling_of_plane() {
    let chart = Chart::new("p", &["x", "y"]).unwrap();
    let g = conformal_rescale(&MetricField::euclidean(&chart), &e("1+x")).unwrap();
    let rot = VectorField::new(&chart, vec![e("y"), e("-x")]).unwrap();
    assert_eq!(conformal_factor(&rot, &g).unwrap(), Some(e("2*y/(1+x)")));
    let stretch = VectorField::new(&chart, vec![e("x"), e("0")]).unwrap();
    assert_eq!(conformal_factor(&stretch, &g).unwrap(), None);
    assert!(matches!(lie_derivative_connection(&stretch, &g), Err(TensorError::NotConformal)));
    let scaling = VectorField::euler(&chart, &[e("1"), e("1")]);
    assert_eq!(conformal_factor(&scaling, &g).unwrap(), Some(e("2 + 2*x/(1+x)")));
    let rep = lie_derivative_connection(&scaling, &g).unwrap();
    assert!(rep.passed(), "{rep}");
}

#[test]
fn nabla_euler_on_flat() {
    let chart = Chart::numbered("t", "t", 3);
    let gamma = ConnectionField::flat(&chart);
    let euler = VectorField::euler(&chart, &[e("4"), e("3"), e("2")]);
    assert_eq!(gamma.nabla_endomorphism(&euler).unwrap(), Matrix::diagonal(&[e("4"), e("3"), e("2")]));
}

fn poly2() -> impl proptest::strategy::Strategy<Value = String> {
    use proptest::prelude::*;
    (-3i64..=3, -3i64..=3, -3i64..=3).prop_map(|(a, b, c)| format!("({a})*x1 + ({b})*x2^2 + ({c})*x1*x2"))
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]

    #[test]
    fn curvature_identities_on_random_metrics(p in poly2(), q in poly2(), r in poly2(), k in 1i64..=4) {
        let chart = Chart::new("p", &["x1", "x2"]).unwrap();
        let m = mat(&[&[&format!("{k} + {p}"), &format!("{r}")], &[&format!("{r}"), &format!("1 + {q}")]]);
        let Ok(g) = MetricField::covariant(&chart, m) else { return Ok(()) };
        let gamma = christoffel(&g);
        proptest::prop_assert!(gamma.metric_defect(&g).is_ok());
        for kk in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    proptest::prop_assert_eq!(gamma.get(kk, i, j), gamma.get(kk, j, i));
                }
            }
        }
        let rm = riemann(&gamma);
        proptest::prop_assert!(rm.antisymmetry().is_ok());
        proptest::prop_assert!(rm.first_bianchi().is_ok());
        proptest::prop_assert!(rm.lowered(&g).pair_symmetry().is_ok());
    }
}
