use flatpencil::expr::{Rational, RationalExpr, Symbols};
use flatpencil::frobenius::{check_wdvv, frobenius_from_prepotential, intersection_form};
use flatpencil::saito::*;
use flatpencil::tensor::Matrix;

fn e(s: &str) -> RationalExpr {
    Symbols::open().parse(s).unwrap()
}

#[test]
fn flat_coordinates_symbolic() {
    for n in [2, 3, 4] {
        let m = modified_flat_coordinates(n, &e("a"), &e("b"), &e("c"), &e("d")).unwrap();
        assert!(m.report.passed(), "{}", m.report);
        assert_eq!(m.params.elimination.len(), 1);
    }
    let m = modified_flat_coordinates(2, &e("a"), &e("b"), &e("c"), &e("d")).unwrap();
    assert_eq!(m.forward[0], e("t1"));
}

#[test]
fn flat_coordinates_identity_and_numeric() {
    let m = modified_flat_coordinates(3, &e("1"), &e("0"), &e("0"), &e("1")).unwrap();
    assert_eq!(m.forward, vec![e("t1"), e("t2"), e("t3")]);
    let m = modified_flat_coordinates(3, &e("2"), &e("3"), &e("1"), &e("2")).unwrap();
    assert!(m.report.passed(), "{}", m.report);
    assert!(matches!(modified_flat_coordinates(3, &e("2"), &e("3"), &e("1"), &e("1")), Err(SaitoError::DeterminantNotOne(_))));
}

#[test]
fn displayed_first_coordinate_fails_pullback() {
    // t~1 = t1 - c/(c t3 + d) t2^2 instead of t1 + c/(2(c t3 + d)) t2^2
    let m = modified_flat_coordinates(3, &e("a"), &e("b"), &e("c"), &e("d")).unwrap();
    let den = e("c*t3 + d");
    let mut forward = m.forward.clone();
    forward[0] = e("t1").sub(&e("c*t2^2").div(&den));
    let jac = Matrix::from_fn(3, 3, |i, j| forward[i].diff(&format!("t{}", j + 1)));
    let flat = Matrix::antidiagonal(3);
    let pulled = jac.transpose().mul(&flat).mul(&jac);
    let expected = flat.scale(&den.square().recip().unwrap());
    let expected = expected.map(|x| m.params.eliminate(x));
    let pulled = pulled.map(|x| m.params.eliminate(x));
    assert!(!pulled.sub(&expected).is_zero());
}

fn catalog(name: &str) -> CoxeterDatum {
    Catalog::builtin().get(name).unwrap()
}

#[test]
fn catalog_lists_builtin_groups() {
    let c = Catalog::builtin();
    assert_eq!(c.names(), vec!["A2", "A3", "B2", "I2(m)"]);
    let text = c.describe();
    assert!(text.contains("I2(m)") && text.contains("A3 (rank 3, degrees 4 3 2)"));
    assert!(matches!(c.get("H3"), Err(SaitoError::UnknownGroup(_, _))));
    assert!(matches!(c.get("I2(2)"), Err(SaitoError::InvalidDatum(_, _))));
}

#[test]
fn dihedral_invariant_expansion() {
    let i5 = catalog("I2(5)");
    assert_eq!(i5.invariants[0], e("x^5 - 10*x^3*y^2 + 5*x*y^4"));
    assert_eq!(i5.degrees, vec![5, 2]);
}

#[test]
fn catalog_parse_errors() {
    assert!(matches!(Catalog::parse("rank = 2"), Err(SaitoError::Catalog(1, _))));
    let bad_degree = "[group.X]\nrank = 2\ncoords = x y\ndegrees = 3 2\ninvariants = x^2*y^2; x^2 + y^2\n";
    assert!(matches!(Catalog::parse(bad_degree), Err(SaitoError::InvalidDatum(_, _))));
    let bad_norm = "[group.X]\nrank = 2\ncoords = x y\ndegrees = 3 2\ninvariants = x^3; x^2 + 2*y^2\n";
    assert!(matches!(Catalog::parse(bad_norm), Err(SaitoError::InvalidDatum(_, _))));
    let extra = "[group.Y]\nrank = 2\ncoords = u v\ndegrees = 3 2\ninvariants = u^3 - 3*u*v^2; u^2 + v^2\n";
    let c = Catalog::parse(extra).unwrap();
    assert_eq!(c.get("Y").unwrap().coords, vec!["u", "v"]);
}

#[test]
fn dihedral_pushforward_matches_closed_form() {
    for m in 3..=6 {
        let cd = catalog(&format!("I2({m})"));
        let g = pushforward_metric(&cd).unwrap();
        let want = format!("[[{}*t2^{}, {}*t1], [{}*t1, 4*t2]]", m * m, m - 1, 2 * m, 2 * m);
        let s = Symbols::with_vars(&["t1", "t2"]);
        let p = |x: &str| s.parse(x).unwrap();
        assert_eq!(*g.upper().get(0, 0), p(&format!("{}*t2^{}", m * m, m - 1)), "{want}");
        assert_eq!(*g.upper().get(0, 1), p(&format!("{}*t1", 2 * m)));
        assert_eq!(*g.upper().get(1, 1), p("4*t2"));
        assert!(round_trip(&cd, &g).is_ok());
    }
}

#[test]
fn a2_and_i2_3_agree() {
    let a = pushforward_metric(&catalog("A2")).unwrap();
    let b = pushforward_metric(&catalog("I2(3)")).unwrap();
    assert_eq!(a.upper(), b.upper());
}

#[test]
fn rewrite_rejects_non_invariants() {
    let cd = catalog("I2(3)");
    assert!(matches!(rewrite(&cd, &e("x*y^3"), 4), Err(SaitoError::RewriteFailed(_))));
    assert_eq!(rewrite(&cd, &e("(x^2 + y^2)^2"), 4).unwrap(), e("t2^2"));
}

#[test]
fn non_saito_basis_is_rejected() {
    let text = "[group.B]\nrank = 2\ncoords = x y\ndegrees = 4 2\ninvariants = x^4 + y^4; x^2 + y^2\n";
    let cd = Catalog::parse(text).unwrap().get("B").unwrap();
    assert!(matches!(saito_pencil(&cd), Err(SaitoError::NormalizationFailed(_, _))));
}

#[test]
fn saito_pencils_of_catalog() {
    for name in ["I2(3)", "I2(4)", "A2", "B2", "A3"] {
        let sp = saito_pencil(&catalog(name)).unwrap();
        assert!(sp.report.passed(), "{}", sp.report);
        assert_eq!(sp.normalization, Rational::from(2 * i64::from(sp.datum.coxeter_number())));
        assert_eq!(sp.report.fact_value("g(E)").unwrap().rsplit(", ").next(), Some("1/2"));
    }
}

#[test]
fn a3_prepotential_satisfies_wdvv() {
    let sp = saito_pencil(&catalog("A3")).unwrap();
    let p = saito_prepotential(&sp).unwrap();
    eprintln!("F = {}", p.f());
    let r = check_wdvv(&p).unwrap();
    assert!(r.passed(), "{r}");
    let s = frobenius_from_prepotential(&p).unwrap();
    assert!(s.report.passed(), "{}", s.report);
    let ig = intersection_form(&s).unwrap();
    assert_eq!(ig.g.upper(), sp.pair.g().upper());
}

fn timed<T>(label: &str, f: impl FnOnce() -> T) -> T {
    let t = std::time::Instant::now();
    let out = f();
    eprintln!("{label}: {:?}", t.elapsed());
    out
}

#[test]
fn modified_dihedral_symbolic() {
    for m in [3, 4, 5] {
        let sp = saito_pencil(&catalog(&format!("I2({m})"))).unwrap();
        let ms = timed(&format!("I2({m})"), || modified_saito(&sp, &e("c"), &e("d")).unwrap());
        assert!(ms.report.passed(), "{}", ms.report);
        assert_eq!(ms.report.fact_value("sectional curvature"), Some("4*c*d"));
    }
}

#[test]
fn modified_with_c_zero_is_the_saito_pencil() {
    let sp = saito_pencil(&catalog("I2(3)")).unwrap();
    let ms = modified_saito(&sp, &e("0"), &e("1")).unwrap();
    assert!(ms.report.passed(), "{}", ms.report);
    assert_eq!(ms.report.fact_value("sectional curvature"), Some("0"));
    assert_eq!(ms.pencil.h(), sp.pair.g());
    assert!(matches!(modified_saito(&sp, &e("0"), &e("0")), Err(SaitoError::InvalidParameters(_))));
}

#[test]
fn modified_a3_numeric() {
    let sp = saito_pencil(&catalog("A3")).unwrap();
    let ms = timed("A3 c=d=1", || modified_saito(&sp, &e("1"), &e("1")).unwrap());
    assert!(ms.report.passed(), "{}", ms.report);
    assert_eq!(ms.report.fact_value("sectional curvature"), Some("4"));
}

#[test]
fn regularity_locus_dihedral() {
    for m in [3, 4, 5] {
        let sp = saito_pencil(&catalog(&format!("I2({m})"))).unwrap();
        let checks = ModifiedChecks { curvature: false, compatibility: false, f_manifold: false, ambient: false };
        let ms = modified_saito_with(&sp, &e("c"), &e("d"), checks).unwrap();
        let loc = regularity_locus(&ms).unwrap();
        assert!(loc.report.passed(), "{}", loc.report);
        let values: Vec<RationalExpr> = loc.excluded.iter().map(|(v, _)| v.clone()).collect();
        assert_eq!(values, vec![e("d/c"), e(&format!("(1-{m})*d/((1+{m})*c)"))], "{}", loc.report);
    }
}

#[test]
fn regularity_locus_limits() {
    let sp = saito_pencil(&catalog("I2(3)")).unwrap();
    let checks = ModifiedChecks { curvature: false, compatibility: false, f_manifold: false, ambient: false };
    let ms = modified_saito_with(&sp, &e("0"), &e("1"), checks).unwrap();
    let loc = regularity_locus(&ms).unwrap();
    assert!(loc.report.passed(), "{}", loc.report);
    assert!(loc.excluded.is_empty());
    let sp = saito_pencil(&catalog("A3")).unwrap();
    let ms = modified_saito_with(&sp, &e("c"), &e("d"), checks).unwrap();
    let loc = regularity_locus(&ms).unwrap();
    assert!(loc.report.passed(), "{}", loc.report);
    assert_eq!(loc.excluded[1].0, e("-3*d/(5*c)"));
}

#[test]
fn modified_a3_symbolic_and_curvature_criterion() {
    use flatpencil::frobenius::theorem_gen_curvature_identity;
    use flatpencil::pencil::bullet_from_pencil;
    let sp = saito_pencil(&catalog("A3")).unwrap();
    let ms = timed("A3 symbolic", || modified_saito(&sp, &e("c"), &e("d")).unwrap());
    assert!(ms.report.passed(), "{}", ms.report);
    assert_eq!(ms.report.fact_value("sectional curvature"), Some("4*c*d"));
    let p = &ms.pencil;
    let b = bullet_from_pencil(&p.scaled, &p.euler).unwrap();
    let r = timed("theorem gen", || theorem_gen_curvature_identity(p.ht(), p.h(), &b.tangent, &p.euler));
    assert!(r.passed(), "{r}");
    assert_eq!(r.fact_value("sectional curvature"), Some("4*c*d"));
}
