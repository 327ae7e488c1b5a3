use flatpencil::conformal::*;
use flatpencil::expr::{RationalExpr, Symbols};
use flatpencil::pencil::MetricPair;
use flatpencil::report::Status;
use flatpencil::tensor::*;

fn e(s: &str) -> RationalExpr {
    Symbols::open().parse(s).unwrap()
}

fn mat(rows: &[&[&str]]) -> Matrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|x| e(x)).collect()).collect())
}

fn i2_3(omega: &str) -> ScaledPencil {
    let chart = Chart::new("t", &["t1", "t2"]).unwrap();
    let g = MetricField::contravariant(&chart, mat(&[&["9*t2^2", "6*t1"], &["6*t1", "4*t2"]])).unwrap();
    let gt = MetricField::contravariant(&chart, mat(&[&["0", "6"], &["6", "0"]])).unwrap();
    let euler = VectorField::euler(&chart, &[e("3"), e("2")]);
    ScaledPencil::new(MetricPair::new(g, gt).unwrap(), e(omega), euler).unwrap()
}

fn remark(f: &str) -> ScaledPencil {
    let chart = Chart::new("p", &["x", "y"]).unwrap();
    let h = MetricField::contravariant(&chart, mat(&[&["0", "x"], &["x", "y"]])).unwrap();
    let ht = MetricField::contravariant(&chart, mat(&[&["0", f], &[f, "0"]])).unwrap();
    let euler = VectorField::euler(&chart, &[e("1"), e("1")]);
    ScaledPencil::new(MetricPair::new(h, ht).unwrap(), e("1"), euler).unwrap()
}

#[test]
fn zero_omega_rejected() {
    let p = i2_3("1");
    assert!(matches!(ScaledPencil::new(p.base, e("0"), p.euler), Err(ConformalError::ZeroOmega)));
}

#[test]
fn modified_i2_3_is_weak_quasihomogeneous() {
    let sp = i2_3("1/(c*t2 + d)");
    let r = weak_quasihomogeneous_check(&sp);
    assert!(r.passed(), "{r}");
    assert!(sp.base.chart().is_constant(&e(r.fact_value("D~ - D").unwrap())));
}

#[test]
fn trivial_omega_gives_frobenius_constants() {
    let sp = i2_3("1");
    let r = weak_quasihomogeneous_check(&sp);
    assert!(r.passed(), "{r}");
    assert_eq!(r.fact_value("D"), Some("2"));
    assert_eq!(r.fact_value("D~"), Some("5"));
}

#[test]
fn omega_in_wrong_coordinate_fails() {
    let sp = i2_3("t1");
    let r = weak_quasihomogeneous_check(&sp);
    assert_eq!(r.status("nabla-euler"), Some(Status::Fail), "{r}");
    assert!(!r.passed());
}

#[test]
fn cheie_on_modified_pencil() {
    let sp = i2_3("1/(c*t2 + d)");
    let r = proposition_cheie_check(&sp).unwrap();
    assert_eq!(r.status("factor-identity"), Some(Status::Pass), "{r}");
    assert_eq!(r.fact_value("k constancy"), Some("constant"));
    assert_eq!(r.status("rescales-iff-constant"), Some(Status::Skipped));
}

#[test]
fn dimension_two_exception() {
    let sp = remark("1+x");
    let r = proposition_cheie_check(&sp).unwrap();
    assert!(r.passed(), "{r}");
    assert_eq!(r.fact_value("D"), Some("1"));
    assert_eq!(e(r.fact_value("D~").unwrap()), e("2 - x/(1+x)"));
    assert_eq!(e(r.fact_value("k").unwrap()), e("1 - x/(1+x)"));
    assert_eq!(r.fact_value("k constancy"), Some("not constant"));
    assert_eq!(r.fact_value("dimension-two exception"), Some("true"));
}

#[test]
fn cheie_requires_conformal_euler() {
    let chart = Chart::new("p", &["x", "y"]).unwrap();
    let g = MetricField::contravariant(&chart, mat(&[&["1", "0"], &["0", "1"]])).unwrap();
    let gt = MetricField::contravariant(&chart, mat(&[&["0", "1"], &["1", "0"]])).unwrap();
    let euler = VectorField::euler(&chart, &[e("1"), e("2")]);
    let sp = ScaledPencil::new(MetricPair::new(g, gt).unwrap(), e("1"), euler).unwrap();
    assert!(matches!(proposition_cheie_check(&sp), Err(ConformalError::PreconditionFailed(_))));
}

#[test]
fn mul_on_modified_pencil() {
    for omega in ["1/(c*t2 + d)", "1", "t2^2 + 3*t2 - 1"] {
        let sp = i2_3(omega);
        let r = proposition_mul_check(&sp).unwrap();
        assert!(r.passed(), "{omega}: {r}");
    }
}

#[test]
fn mul_relations_without_the_wedge_condition() {
    let sp = i2_3("1 + t1");
    let r = proposition_mul_check(&sp).unwrap();
    assert!(r.passed(), "{r}");
}

#[test]
fn f_equivalence_matrix_i2_3() {
    for (omega, expect) in [("1/(c*t2 + d)", true), ("1", true), ("t1", false), ("1 + t1*t2", false)] {
        let sp = i2_3(omega);
        let r = proposition_f_check(&sp).unwrap();
        assert!(r.passed(), "{omega}: {r}");
        assert_eq!(statements(&r), Some([expect; 4]), "{omega}: {r}");
    }
}

fn a3(omega: &str) -> ScaledPencil {
    use flatpencil::saito::{saito_pencil, Catalog};
    let sp = saito_pencil(&Catalog::builtin().get("A3").unwrap()).unwrap();
    ScaledPencil::new(sp.pair, e(omega), sp.euler).unwrap()
}

#[test]
fn cheie_in_dimension_three() {
    let sp = a3("1/(c*t3 + d)");
    let r = proposition_cheie_check(&sp).unwrap();
    assert!(r.passed(), "{r}");
    assert_eq!(r.status("rescales-iff-constant"), Some(Status::Pass));
    assert_eq!(r.fact_value("k constancy"), Some("constant"));
    let sp = a3("1");
    let r = proposition_cheie_check(&sp).unwrap();
    assert!(r.passed(), "{r}");
    assert_eq!(r.fact_value("D~ - D"), r.fact_value("k"));
}

#[test]
fn f_equivalence_matrix_a3() {
    for (omega, expect) in [("1/(c*t3 + d)", true), ("1", true), ("1/(1 + t1)", false), ("t2", false)] {
        let sp = a3(omega);
        let r = proposition_f_check(&sp).unwrap();
        assert!(r.passed(), "{omega}: {r}");
        assert_eq!(statements(&r), Some([expect; 4]), "{omega}: {r}");
    }
}

#[test]
fn mul_on_modified_a3() {
    let sp = a3("1/(c*t3 + d)");
    let r = proposition_mul_check(&sp).unwrap();
    assert!(r.passed(), "{r}");
}
