use crate::expr::{RationalExpr, RuleSet};
use crate::pencil::{MultiplicationTable, Space};
use crate::report::{all_zero_mod, ensure, Outcome, Report};
use crate::tensor::{christoffel, constant_sectional_curvature, lie_derivative_metric, riemann, Matrix, MetricField, OneForm, VectorField};

fn reduce(rules: &RuleSet, e: RationalExpr) -> RationalExpr {
    rules.apply(&e).unwrap_or(e)
}

/// `p` with `a = p b` entrywise, after reduction.
pub(crate) fn proportional(a: &[RationalExpr], b: &[RationalExpr], rules: &RuleSet) -> Option<RationalExpr> {
    let mut p: Option<RationalExpr> = None;
    for (x, y) in a.iter().zip(b) {
        if y.is_zero() {
            if !reduce(rules, x.clone()).is_zero() {
                return None;
            }
            continue;
        }
        match &p {
            None => p = Some(reduce(rules, x.div(y))),
            Some(p) => {
                if !reduce(rules, x.sub(&y.mul(p))).is_zero() {
                    return None;
                }
            }
        }
    }
    Some(p.unwrap_or_else(RationalExpr::zero))
}

/// `(L_V c)^k_ij = V(c^k_ij) - c^l_ij d_l V^k + c^k_lj d_i V^l + c^k_il d_j V^l`
/// for a tangent product, laid out like the table.
pub fn lie_derivative_product(v: &VectorField, table: &MultiplicationTable) -> Vec<RationalExpr> {
    let chart = table.chart();
    let n = chart.dim();
    let dv: Vec<Vec<RationalExpr>> = (0..n).map(|k| chart.coords().iter().map(|c| v.component(k).diff(c)).collect()).collect();
    let mut out = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut x = v.apply(table.get(i, j, k));
                for l in 0..n {
                    if !dv[k][l].is_zero() {
                        x = x.sub(&table.get(i, j, l).mul(&dv[k][l]));
                    }
                    if !dv[l][i].is_zero() {
                        x = x.add(&table.get(l, j, k).mul(&dv[l][i]));
                    }
                    if !dv[l][j].is_zero() {
                        x = x.add(&table.get(i, l, k).mul(&dv[l][j]));
                    }
                }
                out.push(x);
            }
        }
    }
    out
}

/// The `(4,0)` tensor `g~((nabla_X .)(Y, Z), V)` on coordinate fields, at
/// `((i * n + j) * n + k) * n + v`.
pub fn nabla_product(gt: &MetricField, table: &MultiplicationTable) -> Vec<RationalExpr> {
    let chart = table.chart();
    let n = chart.dim();
    let gamma = christoffel(gt);
    let low = gt.lower();
    let mut out = Vec::with_capacity(n * n * n * n);
    for i in 0..n {
        let x = chart.coord(i);
        for j in 0..n {
            for k in 0..n {
                let nab: Vec<RationalExpr> = (0..n)
                    .map(|m| {
                        let mut acc = table.get(j, k, m).diff(x);
                        for l in 0..n {
                            acc = acc
                                .add(&gamma.get(m, i, l).mul(table.get(j, k, l)))
                                .sub(&gamma.get(l, i, j).mul(table.get(l, k, m)))
                                .sub(&gamma.get(l, i, k).mul(table.get(j, l, m)));
                        }
                        acc
                    })
                    .collect();
                for v in 0..n {
                    out.push((0..n).map(|m| low.get(v, m).mul(&nab[m])).sum());
                }
            }
        }
    }
    out
}

fn constancy(table: &MultiplicationTable, e: &RationalExpr) -> &'static str {
    if table.chart().is_constant(e) {
        "constant"
    } else {
        "not constant"
    }
}

/// `E.` and, when it is invertible, its inverse and the identity
/// `e = (E.)^-1 E` of an associative product.
fn euler_data(table: &MultiplicationTable, e: &VectorField) -> (Matrix, RationalExpr, Option<Matrix>) {
    let le = table.left_multiplication(e.comps());
    let det = reduce(table.rules(), le.det());
    let inv = if det.is_zero() { None } else { le.inverse().ok() };
    (le, det, inv)
}

/// Conditions for `(M, ., g~, E)` to be a weak F-manifold: Frobenius algebra
/// at each point, `E` rescales `g~` and `.` (factors and their constancy
/// reported) and is invertible, and the `E`-slot symmetry of
/// `nabla^g~(.)`.
pub fn weak_f_manifold_check(gt: &MetricField, table: &MultiplicationTable, e: &VectorField) -> Report {
    let mut r = Report::new("weak F-manifold conditions");
    let n = table.dim();
    let rules = table.rules();
    if table.space() != Space::Tangent {
        r.record("tangent-product", "the product acts on vector fields", Err("cotangent table supplied".into()));
        return r;
    }
    r.check("algebra-commutative", "the product is commutative", || table.commutativity());
    r.check("algebra-associative", "the product is associative", || table.associativity());
    let (_, det, inv) = euler_data(table, e);
    r.fact("det(E.)", &det);
    r.record("euler-invertible", "E has an inverse for the product", ensure(inv.is_some(), || "det(E.) = 0".into()));
    match &inv {
        Some(inv) => {
            let unit = inv.mul_vec(e.comps());
            r.fact("identity", format_vector(&unit));
            r.check("algebra-identity", "the product has an identity", || table.identity_element(&unit));
        }
        None => r.skip("algebra-identity", "the product has an identity", "E is not invertible"),
    }
    r.check("algebra-invariant", "g~(X.Y, Z) = g~(X, Y.Z)", || table.invariance(gt.lower()));

    let lg = lie_derivative_metric(e, gt).expect("same chart");
    match proportional(lg.entries(), gt.lower().entries(), rules) {
        Some(p) => {
            r.record("euler-rescales-metric", "L_E g~ = D~ g~", Ok(()));
            r.fact("D~", &p);
            r.fact("D~ constancy", constancy(table, &p));
        }
        None => {
            r.record("euler-rescales-metric", "L_E g~ = D~ g~", Err("L_E g~ is not proportional to g~".into()));
        }
    }
    let lc = lie_derivative_product(e, table);
    match proportional(&lc, table.constants(), rules) {
        Some(k) => {
            r.record("euler-rescales-product", "L_E(.) = k .", Ok(()));
            r.fact("k", &k);
            r.fact("k constancy", constancy(table, &k));
        }
        None => {
            r.record("euler-rescales-product", "L_E(.) = k .", Err("L_E(.) is not proportional to the product".into()));
        }
    }

    r.check("nabla-product-euler-symmetry", "nabla(.)(E, Y, Z, V) = nabla(.)(Y, E, Z, V)", || {
        let t = nabla_product(gt, table);
        let at = |i: usize, j: usize, k: usize, v: usize| &t[((i * n + j) * n + k) * n + v];
        let mut items = Vec::new();
        for j in 0..n {
            for k in 0..n {
                for v in 0..n {
                    let mut x = RationalExpr::zero();
                    for i in 0..n {
                        if !e.component(i).is_zero() {
                            x = x.add(&e.component(i).mul(&at(i, j, k, v).sub(at(j, i, k, v))));
                        }
                    }
                    items.push((format!("Y=d{}, Z=d{}, V=d{}", j + 1, k + 1, v + 1), x));
                }
            }
        }
        all_zero_mod(items, rules)
    });
    r
}

fn format_vector(v: &[RationalExpr]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn full_symmetry(t: &[RationalExpr], n: usize, rules: &RuleSet) -> Outcome {
    let at = |i: usize, j: usize, k: usize, v: usize| &t[((i * n + j) * n + k) * n + v];
    let mut items = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for v in 0..n {
                    let x = at(i, j, k, v);
                    if i < j {
                        items.push((format!("slots 1,2 at ({},{},{},{})", i + 1, j + 1, k + 1, v + 1), x.sub(at(j, i, k, v))));
                    }
                    if j < k {
                        items.push((format!("slots 2,3 at ({},{},{},{})", i + 1, j + 1, k + 1, v + 1), x.sub(at(i, k, j, v))));
                    }
                    if k < v {
                        items.push((format!("slots 3,4 at ({},{},{},{})", i + 1, j + 1, k + 1, v + 1), x.sub(at(i, j, v, k))));
                    }
                }
            }
        }
    }
    all_zero_mod(items, rules)
}

/// Total symmetry of `nabla^g~(.)`, and independently the two conditions of
/// Hertling's criterion: the coidentity `g~(e)` is closed and
/// `L_{X.Y}(.) = X.L_Y(.) + Y.L_X(.)`. Records whether the two routes agree.
pub fn f_manifold_check(gt: &MetricField, table: &MultiplicationTable, e: &VectorField) -> Report {
    let mut r = Report::new("F-manifold conditions");
    let chart = table.chart();
    let n = table.dim();
    let rules = table.rules();
    let sym = r.check("nabla-product-symmetric", "nabla(.) is totally symmetric", || full_symmetry(&nabla_product(gt, table), n, rules));
    let (_, _, inv) = euler_data(table, e);
    let Some(inv) = inv else {
        for name in ["coidentity-closed", "hertling-identity", "hertling-agreement"] {
            r.skip(name, "Hertling's criterion", "the product has no computable identity");
        }
        return r;
    };
    let unit = inv.mul_vec(e.comps());
    let closed = r.check("coidentity-closed", "the coidentity g~(e) is closed", || {
        let w = OneForm::new(chart, gt.lower().mul_vec(&unit)).expect("same chart");
        let d = w.exterior_derivative();
        all_zero_mod((0..n * n).filter(|x| x / n < x % n).map(|x| (format!("d(g~(e))[{}][{}]", x / n + 1, x % n + 1), d.entries()[x].clone())), rules)
    });
    let ident = r.check("hertling-identity", "L_{X.Y}(.) = X.L_Y(.) + Y.L_X(.)", || {
        let lie_basis: Vec<Vec<RationalExpr>> = (0..n).map(|b| lie_derivative_product(&VectorField::basis(chart, b), table)).collect();
        let mut items = Vec::new();
        for a in 0..n {
            for b in a..n {
                let xy = VectorField::new(chart, (0..n).map(|k| table.get(a, b, k).clone()).collect()).expect("same chart");
                let lxy = lie_derivative_product(&xy, table);
                for i in 0..n {
                    for j in i..n {
                        for k in 0..n {
                            let mut v = lxy[(i * n + j) * n + k].clone();
                            for m in 0..n {
                                v = v
                                    .sub(&lie_basis[b][(i * n + j) * n + m].mul(table.get(a, m, k)))
                                    .sub(&lie_basis[a][(i * n + j) * n + m].mul(table.get(b, m, k)));
                            }
                            items.push((format!("X=d{}, Y=d{}, on (d{}, d{}), component {}", a + 1, b + 1, i + 1, j + 1, k + 1), v));
                        }
                    }
                }
            }
        }
        all_zero_mod(items, rules)
    });
    r.record(
        "hertling-agreement",
        "total symmetry is equivalent to Hertling's pair of conditions",
        ensure(sym == (closed && ident), || format!("symmetric: {sym}, closed: {closed}, identity: {ident}")),
    );
    r
}

/// The curvature identity characterizing F-manifolds among weak F-manifolds,
/// with `h* g~ = E.`:
/// `R^h_{X,Y} a = R^g~_{X,Y} a + (-R^g~_{X,E} a + a(X) dD~/2) . g~(E^-1 . Y) - (X <-> Y)`.
/// When `g~` is flat it also checks that being an F-manifold is equivalent
/// to `h` having constant sectional curvature `s` with `dD~ = -2s h(E)`.
pub fn theorem_gen_curvature_identity(gt: &MetricField, h: &MetricField, table: &MultiplicationTable, e: &VectorField) -> Report {
    let mut r = Report::new("curvature criterion for F-manifolds");
    let chart = table.chart();
    let n = table.dim();
    let rules = table.rules();
    let lg = lie_derivative_metric(e, gt).expect("same chart");
    let Some(dt) = proportional(lg.entries(), gt.lower().entries(), rules) else {
        r.record("precondition", "L_E g~ = D~ g~", Err("E is not conformal for g~".into()));
        return r;
    };
    let (_, _, inv) = euler_data(table, e);
    let Some(inv) = inv else {
        r.record("precondition", "E is invertible", Err("det(E.) = 0".into()));
        return r;
    };
    r.record("precondition", "L_E g~ = D~ g~ and E is invertible", Ok(()));
    r.fact("D~", &dt);
    if let Some(k) = proportional(&lie_derivative_product(e, table), table.constants(), rules) {
        r.fact("k", &k);
    }
    let rh = riemann(&christoffel(h));
    let rg = riemann(&christoffel(gt));
    let cot = table.transport(Space::Cotangent, gt.upper(), gt.lower());
    let ddt: Vec<RationalExpr> = chart.coords().iter().map(|c| dt.diff(c)).collect();
    // w[j] = g~(E^-1 . d_j)
    let w: Vec<Vec<RationalExpr>> = (0..n).map(|j| gt.lower().mul_vec(&(0..n).map(|k| inv.get(k, j).clone()).collect::<Vec<_>>())).collect();
    let half = RationalExpr::frac(1, 2);
    let beta = |i: usize, a: usize| -> Vec<RationalExpr> {
        (0..n)
            .map(|m| {
                let mut v: RationalExpr = (0..n).filter(|&p| !e.component(p).is_zero()).map(|p| e.component(p).mul(rg.get(a, m, i, p))).sum();
                if a == i {
                    v = v.add(&half.mul(&ddt[m]));
                }
                v
            })
            .collect()
    };
    let ident = r.check("curvature-identity", "curvature identity relating R^h, R^g~ and dD~", || {
        let mut items = Vec::new();
        for a in 0..n {
            let betas: Vec<Vec<RationalExpr>> = (0..n).map(|i| beta(i, a)).collect();
            for i in 0..n {
                for j in i + 1..n {
                    let p1 = cot.product(&betas[i], &w[j]);
                    let p2 = cot.product(&betas[j], &w[i]);
                    for q in 0..n {
                        let lhs = rh.get(a, q, i, j).neg();
                        let rhs = rg.get(a, q, i, j).neg().add(&p1[q]).sub(&p2[q]);
                        items.push((format!("X=d{}, Y=d{}, a=dx{}, component {}", i + 1, j + 1, a + 1, q + 1), lhs.sub(&rhs)));
                    }
                }
            }
        }
        all_zero_mod(items, rules)
    });
    let fman = f_manifold_check(gt, table, e);
    let is_f = fman.get("nabla-product-symmetric").map(|x| x.status == crate::report::Status::Pass).unwrap_or(false);
    r.fact("F-manifold", is_f);
    r.record(
        "gen-equivalence",
        "F-manifold if and only if the curvature identity holds",
        ensure(is_f == ident, || format!("F-manifold: {is_f}, identity: {ident}")),
    );
    if !rg.is_zero() {
        for name in ["cu-constant-curvature", "cu-dD", "cu-equivalence"] {
            r.skip(name, "flat g~ case", "g~ is not flat");
        }
        return r;
    }
    let s = constant_sectional_curvature(h).filter(|s| chart.is_constant(s));
    if let Some(s) = &s {
        r.fact("sectional curvature", s);
    }
    let curv = r.record(
        "cu-constant-curvature",
        "h has constant sectional curvature s",
        ensure(s.is_some(), || "h does not have constant sectional curvature".into()),
    );
    let dd = match &s {
        Some(s) => r.check("cu-dD", "dD~ = -2s h(E)", || {
            let he = h.flat(e);
            let two_s = s.mul(&RationalExpr::int(2));
            all_zero_mod((0..n).map(|m| (format!("component {}", m + 1), ddt[m].add(&two_s.mul(he.component(m))))), rules)
        }),
        None => {
            r.skip("cu-dD", "dD~ = -2s h(E)", "no constant sectional curvature");
            false
        }
    };
    r.record(
        "cu-equivalence",
        "F-manifold if and only if h has constant curvature s and dD~ = -2s h(E)",
        ensure(is_f == (curv && dd), || format!("F-manifold: {is_f}, constant curvature: {curv}, dD~ relation: {dd}")),
    );
    r
}
