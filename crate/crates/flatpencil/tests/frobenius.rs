use flatpencil::expr::{RationalExpr, RewriteRule, RuleSet, Symbols};
use flatpencil::frobenius::*;
use flatpencil::pencil::{MultiplicationTable, Space};
use flatpencil::report::Status;
use flatpencil::tensor::*;

fn chart(n: usize) -> Chart {
    Chart::numbered("t", "t", n)
}

fn symbols() -> Symbols {
    let mut s = Symbols::with_vars(&["t1", "t2", "t3", "a", "b", "c", "d"]);
    s.declare_function("f", &["t2", "t3"]);
    s.declare_function("g", &["t3"]);
    s
}

fn e(s: &str) -> RationalExpr {
    symbols().parse(s).unwrap()
}

fn prepotential(f: &str, euler: Option<&[&str]>, rules: &[&str]) -> Prepotential {
    let c = chart(3);
    let s = symbols();
    let rules = RuleSet::new(rules.iter().map(|r| RewriteRule::parse(r, &s).unwrap()).collect()).unwrap();
    let euler = euler.map(|w| VectorField::new(&c, w.iter().map(|x| e(x)).collect()).unwrap());
    Prepotential::new(&c, e(&format!("t1^2*t3/2 + t1*t2^2/2 + {f}")), Matrix::antidiagonal(3), euler, rules).unwrap()
}

const OPAQUE_RULE: &str = "D[f,2,2,2] -> D[f,1,1,2]^2 - D[f,1,2,2]*D[f,1,1,1]";
const CHAZY_RULE: &str = "D[g,1,1,1] -> 144*D[g,1]^2 - 96*g*D[g,1,1]";

#[test]
fn wdvv_polynomial_cases() {
    assert!(check_wdvv(&prepotential("t2^3", None, &[])).unwrap().passed());
    let bad = check_wdvv(&prepotential("t2^2*t3^2", None, &[])).unwrap();
    assert_eq!(bad.status("wdvv"), Some(Status::Fail));
    assert!(check_wdvv(&prepotential("t2^2*t3^2 + 4/15*t3^5", None, &[])).unwrap().passed());
    let err = frobenius_from_prepotential(&prepotential("t2^2*t3^2", None, &[])).unwrap_err();
    assert!(matches!(err, FrobeniusError::WdvvFailed(_)));
}

#[test]
fn wdvv_with_opaque_function() {
    let p = prepotential("f", None, &[OPAQUE_RULE]);
    assert!(check_wdvv(&p).unwrap().passed());
    let q = prepotential("f", None, &[]);
    assert_eq!(check_wdvv(&q).unwrap().status("wdvv"), Some(Status::Fail));
}

#[test]
fn eta_normalization_enforced() {
    let c = chart(2);
    let p = Prepotential::new(&c, e("t1^2*t2"), Matrix::antidiagonal(2), None, RuleSet::empty()).unwrap();
    assert!(matches!(check_wdvv(&p), Err(FrobeniusError::EtaMismatch { .. })));
    let varying = Matrix::from_rows(vec![vec![e("t1"), e("0")], vec![e("0"), e("1")]]);
    assert!(matches!(Prepotential::new(&c, e("t1"), varying, None, RuleSet::empty()), Err(FrobeniusError::NonConstantEta)));
}

#[test]
fn one_dimensional_structure() {
    let c = chart(1);
    let euler = VectorField::new(&c, vec![e("t1")]).unwrap();
    let p = Prepotential::new(&c, e("t1^3/6"), Matrix::identity(1), Some(euler), RuleSet::empty()).unwrap();
    let s = frobenius_from_prepotential(&p).unwrap();
    assert!(s.report.passed(), "{}", s.report);
    assert_eq!(s.table.get(0, 0, 0), &e("1"));
    let ig = intersection_form(&s).unwrap();
    assert_eq!(ig.g.upper().get(0, 0), &e("t1"));
    assert!(ig.report.passed(), "{}", ig.report);
}

#[test]
fn quintic_structure_and_intersection_form() {
    let p = prepotential("t2^2*t3^2 + 4/15*t3^5", Some(&["t1", "3/4*t2", "1/2*t3"]), &[]);
    let s = frobenius_from_prepotential(&p).unwrap();
    assert!(s.report.passed(), "{}", s.report);
    assert_eq!(s.report.fact_value("D"), Some("3/2"));
    let ig = intersection_form(&s).unwrap();
    assert!(ig.report.passed(), "{}", ig.report);
    assert_eq!(ig.report.status("pencil-product"), Some(Status::Pass));

    let euler = p.euler().unwrap();
    let w = weak_f_manifold_check(p.eta(), &s.table, euler);
    assert!(w.passed(), "{w}");
    assert_eq!(w.fact_value("D~ constancy"), Some("constant"));
    let fm = f_manifold_check(p.eta(), &s.table, euler);
    assert!(fm.passed(), "{fm}");
    let cur = theorem_gen_curvature_identity(p.eta(), &ig.g, &s.table, euler);
    assert!(cur.passed(), "{cur}");
    assert_eq!(cur.fact_value("sectional curvature"), Some("0"));
}

#[test]
fn chazy_structure() {
    let p = prepotential("t2^4*g(t3)", Some(&["t1", "1/2*t2", "0"]), &[CHAZY_RULE]);
    let s = frobenius_from_prepotential(&p).unwrap();
    assert!(s.report.passed(), "{}", s.report);
    assert_eq!(s.report.fact_value("D"), Some("1"));
    let euler = p.euler().unwrap();
    let w = weak_f_manifold_check(p.eta(), &s.table, euler);
    assert!(w.passed(), "{w}");
    let fm = f_manifold_check(p.eta(), &s.table, euler);
    assert!(fm.passed(), "{fm}");
    let without = prepotential("t2^4*g(t3)", None, &[]);
    assert!(matches!(frobenius_from_prepotential(&without), Err(FrobeniusError::WdvvFailed(_))));
}

#[test]
fn missing_euler_field() {
    let s = frobenius_from_prepotential(&prepotential("t2^3", None, &[])).unwrap();
    assert_eq!(s.report.status("euler-eta"), Some(Status::Skipped));
    assert!(matches!(intersection_form(&s), Err(FrobeniusError::MissingEuler)));
}

/// Two-dimensional weak F-manifold whose rescaling factors are not constant.
#[test]
fn weak_f_manifold_with_varying_factors() {
    let mut sy = Symbols::with_vars(&["x", "y"]);
    sy.declare_function("f", &["x"]);
    let p = |s: &str| sy.parse(s).unwrap();
    let c = Chart::new("xy", &["x", "y"]).unwrap();
    let ht = MetricField::contravariant(&c, Matrix::from_rows(vec![vec![p("0"), p("f")], vec![p("f"), p("f")]])).unwrap();
    let z = || p("0");
    let cot = MultiplicationTable::from_fn(&c, Space::Cotangent, |a, b, j| match (a + b, j) {
        (1, 0) => p("1"),
        (2, 1) => p("1"),
        _ => z(),
    });
    let tangent = cot.transport(Space::Tangent, ht.lower(), ht.upper());
    let euler = VectorField::new(&c, vec![p("x"), p("y")]).unwrap();
    let w = weak_f_manifold_check(&ht, &tangent, &euler);
    assert!(w.passed(), "{w}");
    assert_eq!(w.fact_value("D~ constancy"), Some("not constant"));
    assert_eq!(w.fact_value("k constancy"), Some("not constant"));
    let k = sy.parse(w.fact_value("k").unwrap()).unwrap();
    assert_eq!(k, p("1 - x*D[f,1]/f"));
}

#[test]
fn lie_derivative_of_product_along_identity() {
    let p = prepotential("t2^2*t3^2 + 4/15*t3^5", None, &[]);
    let s = frobenius_from_prepotential(&p).unwrap();
    let l = lie_derivative_product(&s.identity, &s.table);
    assert!(l.iter().all(|x| x.is_zero()));
    assert_eq!(nabla_product(p.eta(), &s.table).len(), 81);
}

#[test]
fn sl2_identity() {
    let p = prepotential("t2^2*t3^2 + 4/15*t3^5", None, &[]);
    let t = sl2_transform(&p, &e("1"), &e("0"), &e("0"), &e("1")).unwrap();
    assert!(t.report.passed(), "{}", t.report);
    assert_eq!(t.prepotential.f(), p.f());
}

#[test]
fn sl2_symbolic_on_opaque_solution() {
    let p = prepotential("f", None, &[OPAQUE_RULE]);
    let t = sl2_transform(&p, &e("a"), &e("b"), &e("c"), &e("d")).unwrap();
    assert!(t.report.passed(), "{}", t.report);
    assert_eq!(t.report.status("display"), Some(Status::Pass));
    assert_eq!(t.report.status("wdvv"), Some(Status::Pass));
    assert_eq!(t.params.elimination.len(), 1);
    let expected = e("t1^2*t3/2 + t1*t2^2/2 + c*t2^4/(8*(c*t3 + d)) + (c*t3 + d)^2*f(t2/(c*t3 + d), (a*t3 + b)/(c*t3 + d))");
    assert_eq!(t.prepotential.f(), &t.params.eliminate(&expected));
}

#[test]
fn sl2_functoriality_symbolic() {
    let p = prepotential("f", None, &[OPAQUE_RULE]);
    let d = "(1 + b*c)/a";
    let once = sl2_transform(&p, &e("a"), &e("b"), &e("c"), &e(d)).unwrap();
    assert!(once.params.elimination.is_empty());
    let twice = sl2_transform(&once.prepotential, &e("1"), &e("0"), &e("2"), &e("1")).unwrap();
    assert!(twice.report.passed(), "{}", twice.report);
    let direct = sl2_transform(&p, &e("a + 2*b"), &e("b"), &e(&format!("c + 2*{d}")), &e(d)).unwrap();
    assert!(direct.report.passed(), "{}", direct.report);
    assert_eq!(p.reduce(&twice.prepotential.f().sub(direct.prepotential.f())), e("0"));
}

#[test]
fn sl2_numeric_on_polynomial_solution() {
    let p = prepotential("t2^2*t3^2 + 4/15*t3^5", None, &[]);
    let t = sl2_transform(&p, &e("2"), &e("3"), &e("1"), &e("2")).unwrap();
    assert!(t.report.passed(), "{}", t.report);
    assert!(matches!(sl2_transform(&p, &e("2"), &e("3"), &e("1"), &e("1")), Err(FrobeniusError::Saito(_))));
}

#[test]
fn sl2_functoriality() {
    let p = prepotential("t2^2*t3^2 + 4/15*t3^5", None, &[]);
    let g1 = ["1", "1", "0", "1"].map(e);
    let g2 = ["1", "0", "2", "1"].map(e);
    // g1 g2
    let g12 = ["3", "1", "2", "1"].map(e);
    let once = sl2_transform(&p, &g1[0], &g1[1], &g1[2], &g1[3]).unwrap();
    let twice = sl2_transform(&once.prepotential, &g2[0], &g2[1], &g2[2], &g2[3]).unwrap();
    assert!(twice.report.passed(), "{}", twice.report);
    let direct = sl2_transform(&p, &g12[0], &g12[1], &g12[2], &g12[3]).unwrap();
    assert_eq!(twice.prepotential.f(), direct.prepotential.f());
}

#[test]
fn sl2_requires_antidiagonal_metric() {
    let c = chart(2);
    let p = Prepotential::new(&c, e("t1^3/6 + t1*t2^2/2"), Matrix::identity(2), None, RuleSet::empty()).unwrap();
    assert!(matches!(sl2_transform(&p, &e("1"), &e("0"), &e("0"), &e("1")), Err(FrobeniusError::NotAntiDiagonal)));
}
