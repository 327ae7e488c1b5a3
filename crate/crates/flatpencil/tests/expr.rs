use std::collections::BTreeMap;

use flatpencil::expr::*;
use proptest::prelude::*;

fn symbols() -> Symbols {
    let mut s = Symbols::with_vars(&["x", "y", "z", "c", "d", "tn", "t", "u", "w"]);
    s.declare_function("f", &["t2", "t3"]);
    s
}

fn e(text: &str) -> RationalExpr {
    symbols().parse(text).unwrap()
}

fn rule() -> RuleSet {
    let r = RewriteRule::parse("D[f,2,2,2] -> D[f,1,1,2]^2 - D[f,1,2,2]*D[f,1,1,1]", &symbols()).unwrap();
    RuleSet::new(vec![r]).unwrap()
}

fn bind(pairs: &[(&str, &str)]) -> BTreeMap<String, RationalExpr> {
    pairs.iter().map(|(k, v)| (k.to_string(), e(v))).collect()
}

#[test]
fn normalize_examples() {
    assert_eq!(e("(x^2 - 1)/(x - 1)"), e("x + 1"));
    assert!(e("(x + y) - (y + x)").is_zero());
    let r = rule();
    let residual = e("D[f,2,2,2] - (D[f,1,1,2]^2 - D[f,1,2,2]*D[f,1,1,1])");
    assert!(!residual.is_zero());
    assert!(normalize(&residual, &r).unwrap().is_zero());
    assert_eq!(symbols().parse("x/(y - y)"), Err(ExprError::ZeroDenominator));
    assert_eq!(quotient(&e("x"), &e("0")), Err(ExprError::ZeroDenominator));
}

#[test]
fn differentiate_examples() {
    let s = symbols();
    assert_eq!(differentiate(&e("x^2*y"), "x", &s).unwrap(), e("2*x*y"));
    let mut sf = Symbols::new();
    sf.declare_function("f", &["t2", "t3"]);
    assert_eq!(differentiate(&sf.parse("f(t2, t3)").unwrap(), "t3", &sf).unwrap(), sf.parse("D[f,2]").unwrap());
    assert_eq!(differentiate(&e("(c*tn + d)^-1"), "tn", &s).unwrap(), e("-c*(c*tn + d)^-2"));
    assert_eq!(differentiate(&e("x"), "q", &s), Err(ExprError::UnknownVariable("q".into())));
}

#[test]
fn substitute_examples() {
    let s = symbols();
    assert_eq!(substitute(&e("x^2 + y^2"), &bind(&[("x", "t"), ("y", "0")]), &s).unwrap(), e("t^2"));
    let mut sa = Symbols::with_vars(&["t", "a", "b", "c"]);
    sa.declare_var("d");
    let d = sa.parse("(1 + b*c)/a").unwrap();
    let mobius = |x: &str| sa.parse(x).unwrap().substitute(&[("d".to_string(), d.clone())].into_iter().collect()).unwrap();
    let forward = mobius("(a*t + b)/(c*t + d)");
    let inverse = mobius("(d*t - b)/(-c*t + a)");
    let back = inverse.substitute(&[("t".to_string(), forward)].into_iter().collect()).unwrap();
    assert_eq!(back, sa.parse("t").unwrap());
    let mut sf = Symbols::with_vars(&["u", "w"]);
    sf.declare_function("f", &["t2", "t3"]);
    let g = substitute(&sf.parse("f(t2, t3)").unwrap(), &[("t2".to_string(), sf.parse("u/w").unwrap())].into_iter().collect(), &sf).unwrap();
    assert_eq!(g, sf.parse("f(u/w, t3)").unwrap());
    assert_eq!(substitute(&e("x"), &bind(&[("x", "c")]), &Symbols::new()), Err(ExprError::UnknownVariable("x".into())));
    assert_eq!(e("1/x").substitute(&bind(&[("x", "y - y")])), Err(ExprError::ZeroDenominator));
}

#[test]
fn parse_and_print_examples() {
    let s = Symbols::with_vars(&["t1", "t2", "t3"]);
    let q = s.parse("1/2*t1^2*t3 + 1/2*t1*t2^2").unwrap();
    assert_eq!(print(&q), "1/2*t1^2*t3 + 1/2*t1*t2^2");
    assert_eq!(q.diff("t1").diff("t1").diff("t3"), RationalExpr::one());
    assert_eq!(e("(c*tn + d)^-1"), RationalExpr::one().div(&e("c*tn + d")));
    assert!(matches!(parse("x*+", &symbols()), Err(ExprError::Syntax { offset: 2, .. })));
    assert!(matches!(parse("x + q", &symbols()), Err(ExprError::UnknownSymbol { offset: 4, .. })));
}

#[test]
fn rational_invariants() {
    let r = Rational::new(6, -4);
    assert_eq!(r.to_string(), "-3/2");
    assert_eq!(r.denom(), &num_bigint::BigInt::from(2));
    assert_eq!("10/-4".parse::<Rational>(), Ok(Rational::new(-5, 2)));
    assert!("1/0".parse::<Rational>().is_err());
}

#[test]
fn polynomials_drop_zero_terms() {
    let p = e("x*y + 3 - x*y").numer().clone();
    assert_eq!(p.nterms(), 1);
    assert!(p.terms().iter().all(|(_, c)| !c.is_zero()));
    assert!(p.terms().iter().all(|(ex, _)| ex.len() == p.vars().len()));
}

#[test]
fn gcd_reduced_quotients() {
    let q = e("(x^3 - y^3)/(x^2 - y^2)");
    assert_eq!(q, e("(x^2 + x*y + y^2)/(x + y)"));
    assert!(gcd(q.numer(), q.denom()).is_constant());
}

fn leaf() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("x".to_string()),
        Just("y".to_string()),
        Just("z".to_string()),
        (-7i64..=7).prop_map(|n| format!("({n})")),
        (1i64..=5, 2i64..=6).prop_map(|(n, d)| format!("({n}/{d})")),
        Just("f(x, y)".to_string()),
        Just("D[f,1](y, x*z)".to_string()),
    ]
}

fn expr_text() -> impl Strategy<Value = String> {
    leaf().prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})/(({b})^2 + 1)")),
            (inner, 0u32..=3).prop_map(|(a, k)| format!("({a})^{k}")),
        ]
    })
}

fn expr() -> impl Strategy<Value = RationalExpr> {
    expr_text().prop_map(|t| e(&t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in expr(), b in expr(), c in expr()) {
        prop_assert!(a.add(&b).add(&c).sub(&a.add(&b.add(&c))).is_zero());
        prop_assert!(a.mul(&b).mul(&c).sub(&a.mul(&b.mul(&c))).is_zero());
        prop_assert!(a.mul(&b.add(&c)).sub(&a.mul(&b).add(&a.mul(&c))).is_zero());
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn leibniz_rule(a in expr(), b in expr()) {
        let lhs = a.mul(&b).diff("x");
        let rhs = a.diff("x").mul(&b).add(&a.mul(&b.diff("x")));
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn parse_print_round_trip(a in expr()) {
        prop_assert_eq!(e(&print(&a)), a.clone());
        prop_assert_eq!(e(&a.to_string()), a);
    }

    #[test]
    fn rewriting_reaches_a_fixed_point(k in prop::collection::vec((0u32..=2, 0u32..=5, -3i64..=3), 1..4)) {
        let text: Vec<String> = k
            .iter()
            .map(|(i, j, c)| {
                let idx: Vec<String> = std::iter::repeat("1").take(*i as usize).chain(std::iter::repeat("2").take(*j as usize)).map(String::from).collect();
                if idx.is_empty() { format!("({c})*f(t2, t3)") } else { format!("({c})*D[f,{}]", idx.join(",")) }
            })
            .collect();
        let mut s = Symbols::new();
        s.declare_function("f", &["t2", "t3"]);
        let ex = s.parse(&text.join(" + ")).unwrap();
        let rules = rule();
        let once = normalize(&ex, &rules).unwrap();
        prop_assert_eq!(normalize(&once, &rules).unwrap(), once.clone());
        for a in once.atoms() {
            if let Some(f) = a.as_func() {
                prop_assert!(f.index[1] < 3, "{} still reducible", a);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn mixed_partials_commute(a in expr()) {
        prop_assert_eq!(a.diff("x").diff("y"), a.diff("y").diff("x"));
        prop_assert_eq!(a.diff("x").diff("z"), a.diff("z").diff("x"));
    }
}
