use flatpencil::expr::{RationalExpr, Symbols};
use flatpencil::pencil::*;
use flatpencil::tensor::*;

fn e(s: &str) -> RationalExpr {
    Symbols::open().parse(s).unwrap()
}

fn mat(rows: &[&[&str]]) -> Matrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|x| e(x)).collect()).collect())
}

fn i2_3() -> MetricPair {
    let chart = Chart::new("t", &["t1", "t2"]).unwrap();
    let g = MetricField::contravariant(&chart, mat(&[&["9*t2^2", "6*t1"], &["6*t1", "4*t2"]])).unwrap();
    let gt = MetricField::contravariant(&chart, mat(&[&["0", "6"], &["6", "0"]])).unwrap();
    MetricPair::new(g, gt).unwrap()
}

#[test]
fn identical_metrics_give_zero_product() {
    let p = i2_3();
    let q = MetricPair::new(p.g().clone(), p.g().clone()).unwrap();
    assert!(q.circ().is_zero());
    let chart = Chart::new("t", &["t1", "t2"]).unwrap();
    let g = MetricField::contravariant(&chart, mat(&[&["t1^2+1", "t2"], &["t2", "3"]])).unwrap();
    let gt = MetricField::contravariant(&chart, mat(&[&["2", "1"], &["1", "5"]])).unwrap();
    let a = MetricPair::new(MetricField::euclidean(&chart), gt.clone()).unwrap();
    assert!(a.circ().is_zero());
    let b = MetricPair::new(g.clone(), gt).unwrap();
    assert!(!b.circ().is_zero());
}

#[test]
fn saito_i2_3_is_flat_pencil() {
    let p = i2_3();
    let t = std::time::Instant::now();
    let ac = is_almost_compatible(&p);
    assert!(ac.passed(), "{ac}");
    let aux = check_auxiliary_identities(&p);
    assert!(aux.passed(), "{aux}");
    let c = is_compatible(&p);
    assert!(c.passed(), "{c}");
    let f = is_flat_pencil(&p);
    assert!(f.passed(), "{f}");
    eprintln!("{:?}", t.elapsed());
}

#[test]
fn perturbed_pair_fails_consistently() {
    let p = i2_3();
    let chart = p.chart().clone();
    let gt = MetricField::contravariant(&chart, mat(&[&["0", "6"], &["6", "t1"]])).unwrap();
    let q = MetricPair::new(p.g().clone(), gt).unwrap();
    let ac = is_almost_compatible(&q);
    let c = is_compatible(&q);
    eprintln!("{ac}\n{c}");
    assert!(!ac.passed() || !c.passed());
    assert_eq!(c.status("compatible-agreement"), Some(flatpencil::report::Status::Pass));
}

#[test]
fn nijenhuis_examples() {
    let chart = Chart::new("p", &["x", "y"]).unwrap();
    let id = EndomorphismField::new(&chart, Matrix::identity(2)).unwrap();
    assert!(nijenhuis(&id).iter().all(|v| v.is_zero()));
    let k = EndomorphismField::new(&chart, mat(&[&["0", "x"], &["1", "0"]])).unwrap();
    assert!(nijenhuis(&k).iter().any(|v| !v.is_zero()));
}

#[test]
fn remark_pair_product() {
    let chart = Chart::new("p", &["x", "y"]).unwrap();
    let h = MetricField::contravariant(&chart, mat(&[&["0", "x"], &["x", "y"]])).unwrap();
    let ht = MetricField::contravariant(&chart, mat(&[&["0", "1+x"], &["1+x", "0"]])).unwrap();
    let p = MetricPair::new(h, ht).unwrap();
    let euler = VectorField::euler(&chart, &[e("1"), e("1")]);
    let b = bullet_from_pencil(&p, &euler).unwrap();
    let c = &b.cotangent;
    assert_eq!(*c.get(0, 0, 0), e("0"));
    assert_eq!(*c.get(0, 0, 1), e("0"));
    assert_eq!(*c.get(0, 1, 0), e("1"));
    assert_eq!(*c.get(0, 1, 1), e("0"));
    assert_eq!(*c.get(1, 1, 0), e("0"));
    assert_eq!(*c.get(1, 1, 1), e("1"));
    assert!(b.report.passed(), "{}", b.report);
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(12))]

    #[test]
    fn rescaled_compatible_pair_stays_compatible(c in proptest::collection::vec(-3i64..=3, 6)) {
        let w = e(&format!("{} + ({})*t1 + ({})*t2 + ({})*t1^2 + ({})*t1*t2 + ({})*t2^2", c[0], c[1], c[2], c[3], c[4], c[5]));
        proptest::prop_assume!(!w.is_zero());
        let p = i2_3().scaled(&w).unwrap();
        let r = is_compatible(&p);
        proptest::prop_assert!(r.passed(), "W = {}: {}", w, r);
    }
}
