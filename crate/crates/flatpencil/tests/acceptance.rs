use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use flatpencil::conformal::{proposition_cheie_check, proposition_f_check, proposition_mul_check, statements, ScaledPencil};
use flatpencil::expr::{RationalExpr, RewriteRule, RuleSet, Symbols};
use flatpencil::frobenius::{check_wdvv, frobenius_from_prepotential, intersection_form, sl2_transform, theorem_gen_curvature_identity, Prepotential};
use flatpencil::jet::oracle_agreement;
use flatpencil::pencil::{bullet_from_pencil, is_compatible, is_flat_pencil, MetricPair};
use flatpencil::report::{Report, Status};
use flatpencil::saito::{modified_flat_coordinates, modified_saito, regularity_locus, saito_pencil, Catalog, ModifiedSaito, SaitoPencil};
use flatpencil::tensor::{Chart, Matrix, MetricField, VectorField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20;
const ORACLE_POINTS: usize = 20;

type Outcome = Result<String, String>;

fn e(s: &str) -> RationalExpr {
    Symbols::open().parse(s).unwrap()
}

fn require(r: &Report, what: &str) -> Result<(), String> {
    if r.passed() {
        Ok(())
    } else {
        Err(format!("{what}:\n{r}"))
    }
}

fn status(r: &Report, name: &str, want: Status) -> Result<(), String> {
    match r.status(name) {
        Some(s) if s == want => Ok(()),
        s => Err(format!("{name}: expected {want:?}, got {s:?}\n{r}")),
    }
}

fn saito(name: &str) -> SaitoPencil {
    saito_pencil(&Catalog::builtin().get(name).unwrap()).unwrap()
}

/// Metrics collected along the way, checked against the jet oracle at the end.
#[derive(Default)]
struct Metrics(Vec<(String, MetricField)>);

impl Metrics {
    fn add(&mut self, label: impl Into<String>, g: &MetricField) {
        self.0.push((label.into(), g.clone()));
    }
}

struct Shared {
    modified: Vec<(String, ModifiedSaito)>,
    metrics: Metrics,
}

fn c1(s: &mut Shared) -> Outcome {
    for m in [3, 4, 5] {
        let name = format!("I2({m})");
        let ms = modified_saito(&saito(&name), &e("c"), &e("d")).map_err(|x| x.to_string())?;
        require(&ms.report, &name)?;
        status(&ms.report, "h~-flat", Status::Pass)?;
        let k = ms.report.fact_value("sectional curvature");
        if k != Some("4*c*d") {
            return Err(format!("{name}: sectional curvature {k:?}"));
        }
        s.metrics.add(format!("h {name}"), ms.pencil.h());
        s.metrics.add(format!("h~ {name}"), ms.pencil.ht());
        s.modified.push((name, ms));
    }
    Ok("I2(3), I2(4), I2(5): h~ flat, K(h) = 4*c*d".into())
}

fn c2(_: &mut Shared) -> Outcome {
    for n in [2, 3] {
        let m = modified_flat_coordinates(n, &e("a"), &e("b"), &e("c"), &e("d")).map_err(|x| x.to_string())?;
        require(&m.report, &format!("n = {n}"))?;
        status(&m.report, "pullback", Status::Pass)?;
    }
    Ok("n = 2, 3 with ad - bc = 1".into())
}

fn c3(_: &mut Shared) -> Outcome {
    let c = Chart::numbered("t", "t", 3);
    let mut s = Symbols::with_vars(&["t1", "t2", "t3", "a", "b", "c", "d"]);
    s.declare_function("f", &["t2", "t3"]);
    let p = |x: &str| s.parse(x).unwrap();
    let rules = RuleSet::new(vec![RewriteRule::parse("D[f,2,2,2] -> D[f,1,1,2]^2 - D[f,1,2,2]*D[f,1,1,1]", &s).unwrap()]).unwrap();
    let pre = Prepotential::new(&c, p("t1^2*t3/2 + t1*t2^2/2 + f(t2, t3)"), Matrix::antidiagonal(3), None, rules).map_err(|x| x.to_string())?;
    let t = sl2_transform(&pre, &p("a"), &p("b"), &p("c"), &p("d")).map_err(|x| x.to_string())?;
    require(&t.report, "transform")?;
    status(&t.report, "wdvv", Status::Pass)?;
    let expected = p("t1^2*t3/2 + t1*t2^2/2 + c*t2^4/(8*(c*t3 + d)) + (c*t3 + d)^2*f(t2/(c*t3 + d), (a*t3 + b)/(c*t3 + d))");
    if t.prepotential.f() != &t.params.eliminate(&expected) {
        return Err(format!("F~ = {}", t.prepotential.f()));
    }
    Ok("F~ matches the closed form; WDVV holds with the single rule for f".into())
}

fn c4(s: &mut Shared) -> Outcome {
    for (name, ms) in &s.modified {
        let loc = regularity_locus(ms).map_err(|x| x.to_string())?;
        require(&loc.report, name)?;
        status(&loc.report, "t-formula", Status::Pass)?;
        let d1 = ms.saito.datum.coxeter_number();
        let want = vec![e("d/c"), e(&format!("(1 - {d1})*d/((1 + {d1})*c)"))];
        let got: Vec<RationalExpr> = loc.excluded.iter().map(|(v, _)| v.clone()).collect();
        if got != want {
            return Err(format!("{name}: loci {got:?}"));
        }
    }
    Ok("I2(3), I2(4), I2(5): det T vanishes on t^n = d/c and t^n = (1 - d1) d/((1 + d1) c); T(u) matches".into())
}

fn c5(s: &mut Shared) -> Outcome {
    let base = saito("I2(3)").pair;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut done = 0;
    while done < 10 {
        let c: Vec<i64> = (0..6).map(|_| rng.gen_range(-4..=4)).collect();
        let w = e(&format!("{} + ({})*t1 + ({})*t2 + ({})*t1^2 + ({})*t1*t2 + ({})*t2^2", c[0], c[1], c[2], c[3], c[4], c[5]));
        if w.is_zero() {
            continue;
        }
        let p = base.scaled(&w).map_err(|x| x.to_string())?;
        require(&is_compatible(&p), &format!("W = {w}"))?;
        if done < 2 {
            s.metrics.add(format!("W^2 g, W = {w}"), p.g());
            s.metrics.add(format!("W^2 g~, W = {w}"), p.gt());
        }
        done += 1;
    }
    Ok(format!("10 random W of degree <= 2 (seed {SEED})"))
}

fn c6(s: &mut Shared) -> Outcome {
    let a3 = modified_saito(&saito("A3"), &e("c"), &e("d")).map_err(|x| x.to_string())?;
    s.modified.push(("A3".into(), a3));
    for (name, ms) in &s.modified {
        let r = proposition_mul_check(&ms.pencil).map_err(|x| x.to_string())?;
        require(&r, name)?;
        status(&r, "tangent-equal", Status::Pass)?;
    }
    let sp = saito("A3");
    let fs = frobenius_from_prepotential(&flatpencil::saito::saito_prepotential(&sp).map_err(|x| x.to_string())?).map_err(|x| x.to_string())?;
    let ig = intersection_form(&fs).map_err(|x| x.to_string())?;
    require(&ig.report, "A3 intersection form")?;
    status(&ig.report, "pencil-product", Status::Pass)?;
    Ok("I2(3), I2(4), I2(5), A3: tangent products agree; A3 matches its Frobenius product".into())
}

fn a3_scaled(omega: &str) -> ScaledPencil {
    let sp = saito("A3");
    ScaledPencil::new(sp.pair, e(omega), sp.euler).unwrap()
}

fn c7(s: &mut Shared) -> Outcome {
    let chart = Chart::new("t", &["t1", "t2"]).unwrap();
    let i2 = saito("I2(3)");
    let i2_scaled = |w: &str| ScaledPencil::new(i2.pair.clone(), e(w), VectorField::euler(&chart, &[e("3"), e("2")])).unwrap();
    let cases = [
        ("I2(3)", "1/(c*t2 + d)", i2_scaled("1/(c*t2 + d)")),
        ("I2(3)", "1", i2_scaled("1")),
        ("A3", "1/(c*t3 + d)", a3_scaled("1/(c*t3 + d)")),
        ("A3", "1", a3_scaled("1")),
        ("A3", "1/(1 + t1)", a3_scaled("1/(1 + t1)")),
        ("A3", "t2", a3_scaled("t2")),
    ];
    let mut summary = Vec::new();
    for (g, w, sp) in &cases {
        let r = proposition_f_check(sp).map_err(|x| x.to_string())?;
        require(&r, &format!("{g}, W = {w}"))?;
        let st = statements(&r).ok_or_else(|| format!("{g}, W = {w}: statements missing"))?;
        if st.iter().any(|x| *x != st[1]) {
            return Err(format!("{g}, W = {w}: {st:?}"));
        }
        summary.push(format!("{g} W = {w}: {}", st[1]));
        if *g == "A3" && *w == "1/(1 + t1)" {
            s.metrics.add("A3 h, W = 1/(1 + t1)", sp.h());
        }
    }
    Ok(summary.join("; "))
}

fn c8(_: &mut Shared) -> Outcome {
    let chart = Chart::new("p", &["x", "y"]).unwrap();
    let m = |rows: [[&str; 2]; 2]| Matrix::from_rows(rows.iter().map(|r| r.iter().map(|x| e(x)).collect()).collect());
    let h = MetricField::contravariant(&chart, m([["0", "x"], ["x", "y"]])).unwrap();
    let ht = MetricField::contravariant(&chart, m([["0", "1+x"], ["1+x", "0"]])).unwrap();
    let euler = VectorField::euler(&chart, &[e("1"), e("1")]);
    let pair = MetricPair::new(h, ht).unwrap();
    let b = bullet_from_pencil(&pair, &euler).map_err(|x| x.to_string())?;
    let c = &b.cotangent;
    let table = [(0, 0, [0, 0]), (0, 1, [1, 0]), (1, 1, [0, 1])];
    for (i, j, want) in table {
        for (k, w) in want.iter().enumerate() {
            if *c.get(i, j, k) != RationalExpr::int(*w) {
                return Err(format!("cotangent product ({i},{j}) component {k} = {}", c.get(i, j, k)));
            }
        }
    }
    let sp = ScaledPencil::new(pair, e("1"), euler).unwrap();
    let r = proposition_cheie_check(&sp).map_err(|x| x.to_string())?;
    require(&r, "remark pair")?;
    let fact = |k: &str| r.fact_value(k).map(e);
    if fact("D") != Some(e("1")) || fact("D~") != Some(e("2 - x/(1+x)")) {
        return Err(format!("D = {:?}, D~ = {:?}", r.fact_value("D"), r.fact_value("D~")));
    }
    if r.fact_value("k constancy") != Some("not constant") || r.fact_value("dimension-two exception") != Some("true") {
        return Err(format!("remark pair factor: {r}"));
    }
    for w in ["1/(c*t3 + d)", "1"] {
        let r = proposition_cheie_check(&a3_scaled(w)).map_err(|x| x.to_string())?;
        require(&r, &format!("A3, W = {w}"))?;
        if r.fact_value("k constancy") != Some("constant") {
            return Err(format!("A3, W = {w}: {r}"));
        }
    }
    Ok(format!("k = {} in dimension two; constant on A3", r.fact_value("k").unwrap_or("?")))
}

fn c9(s: &mut Shared) -> Outcome {
    for name in ["I2(3)", "I2(4)", "A3"] {
        let sp = saito(name);
        require(&sp.report, name)?;
        require(&is_flat_pencil(&sp.pair), &format!("{name} flat pencil"))?;
        s.metrics.add(format!("g {name}"), sp.pair.g());
        s.metrics.add(format!("g~ {name}"), sp.pair.gt());
    }
    let p = flatpencil::saito::saito_prepotential(&saito("A3")).map_err(|x| x.to_string())?;
    require(&check_wdvv(&p).map_err(|x| x.to_string())?, "A3 WDVV")?;
    let bad_f = p.f().add(&e("1/1024*t2^2*t3^2"));
    let bad = Prepotential::new(p.chart(), bad_f, p.eta().lower().clone(), None, RuleSet::empty()).map_err(|x| x.to_string())?;
    let r = check_wdvv(&bad).map_err(|x| x.to_string())?;
    if r.passed() {
        return Err("perturbed A3 prepotential passes WDVV".into());
    }
    Ok(format!("I2(3), I2(4), A3 flat pencils; F = {} passes WDVV, perturbed F fails", p.f()))
}

fn c11(s: &mut Shared) -> Outcome {
    let (_, ms) = s.modified.iter().find(|(n, _)| n == "A3").ok_or("modified A3 missing")?;
    require(&ms.report, "modified A3")?;
    let p = &ms.pencil;
    let b = bullet_from_pencil(&p.scaled, &p.euler).map_err(|x| x.to_string())?;
    let r = theorem_gen_curvature_identity(p.ht(), p.h(), &b.tangent, &p.euler);
    require(&r, "curvature criterion")?;
    status(&r, "curvature-identity", Status::Pass)?;
    status(&r, "cu-dD", Status::Pass)?;
    if r.fact_value("sectional curvature") != Some("4*c*d") {
        return Err(format!("s = {:?}", r.fact_value("sectional curvature")));
    }
    s.metrics.add("h A3", p.h());
    s.metrics.add("h~ A3", p.ht());
    Ok("modified A3: dD~ = -2s h(E) with s = 4*c*d".into())
}

fn c10(s: &mut Shared) -> Outcome {
    let mut points = 0;
    for (label, g) in &s.metrics.0 {
        let r = oracle_agreement(g, ORACLE_POINTS, SEED);
        require(&r, label)?;
        let used: usize = r.fact_value("points").and_then(|v| v.parse().ok()).unwrap_or(0);
        if used < ORACLE_POINTS {
            return Err(format!("{label}: only {used} points"));
        }
        points += used;
    }
    Ok(format!("{} metrics, {points} points, seed {SEED}", s.metrics.0.len()))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn(&mut Shared) -> Outcome); 11] = [
        (1, "modified Saito pencils: h~ flat, h of curvature 4cd", c1),
        (2, "flat coordinates of h~", c2),
        (3, "SL(2) action on a WDVV solution", c3),
        (4, "regularity locus and T", c4),
        (5, "compatibility under conformal rescaling", c5),
        (6, "tangent products of rescaled pairs", c6),
        (7, "equivalence of the four statements", c7),
        (8, "dimension-two exception", c8),
        (9, "flat pencils and WDVV", c9),
        (11, "curvature criterion on modified A3", c11),
        (10, "jet oracle agreement", c10),
    ];
    let mut shared = Shared { modified: Vec::new(), metrics: Metrics::default() };
    let mut lines = Vec::new();
    for (n, title, f) in criteria {
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(|| f(&mut shared))).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        lines.push((n, title, out, t.elapsed()));
    }
    lines.sort_by_key(|(n, ..)| *n);
    let mut failed = 0;
    for (n, title, out, dt) in &lines {
        match out {
            Ok(detail) => println!("criterion {n:>2} pass: {title} ({detail}) [{:.1}s]", dt.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2} FAIL: {title}: {why}");
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", lines.len() - failed, lines.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
