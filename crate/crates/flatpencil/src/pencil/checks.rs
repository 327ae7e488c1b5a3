use super::{nijenhuis_vanishes, MetricPair, LAMBDA};
use crate::expr::RationalExpr;
use crate::report::{all_zero_mod, ensure, Outcome, Report};

const ALMOST: &str = "almost compatible pair";
const COMPAT: &str = "compatible pair";

fn lambda() -> RationalExpr {
    RationalExpr::var(LAMBDA)
}

/// Contravariant Christoffel symbols `g^mj G^k_ij`, at `(m * n + k) * n + i`.
fn raised_gamma(up: &crate::tensor::Matrix, gamma: &crate::tensor::ConnectionField) -> Vec<RationalExpr> {
    let n = gamma.dim();
    let mut out = Vec::with_capacity(n * n * n);
    for m in 0..n {
        for k in 0..n {
            for i in 0..n {
                out.push((0..n).filter(|&j| !up.get(m, j).is_zero()).map(|j| up.get(m, j).mul(gamma.get(k, i, j))).sum());
            }
        }
    }
    out
}

fn lambda_relation(p: &MetricPair) -> Outcome {
    let n = p.dim();
    let a = raised_gamma(p.pencil_metric().upper(), p.pencil_connection());
    let b = raised_gamma(p.g().upper(), p.gamma_g());
    let c = raised_gamma(p.gt().upper(), p.gamma_gt());
    let lam = lambda();
    all_zero_mod((0..n * n * n).map(|x| {
        let label = format!("X=d{}, a=dx{}, component {}", x % n + 1, (x / n) % n + 1, x / (n * n) + 1);
        (label, a[x].sub(&b[x]).sub(&lam.mul(&c[x])))
    }), p.rules())
}

/// Almost compatibility by both routes: vanishing of `N_{g* g~}` and the
/// defining relation `g_l* nabla^l = g* nabla^g + l g~* nabla^g~`, plus
/// whether they agree.
pub fn is_almost_compatible(p: &MetricPair) -> Report {
    let mut r = Report::new("almost compatibility");
    let a = r.check("nijenhuis", "integrability tensor of g* g~ vanishes", || nijenhuis_vanishes(&p.k_endomorphism(), p.rules()));
    let b = r.check("almost-compatible", ALMOST, || lambda_relation(p));
    r.record("almost-compatible-agreement", "almost compatibility is equivalent to N_K = 0", ensure(a == b, || format!("N_K = 0: {a}, defining relation: {b}")));
    r
}

/// `(nabla^g~_X a - nabla^g_X a)_j` for `X = d_i`, `a = dx^k`: `-(G~ - G)^k_ij`.
fn delta(p: &MetricPair) -> Vec<RationalExpr> {
    let n = p.dim();
    (0..n * n * n).map(|x| p.difference(x / (n * n), (x / n) % n, x % n)).collect()
}

/// The two consequences of almost compatibility and the exchange symmetry
/// `g*(nabla^g~_X a - nabla^g_X a, g~(Y))` symmetric in `X, Y`. Skipped
/// when the pair is not almost compatible.
pub fn check_auxiliary_identities(p: &MetricPair) -> Report {
    let mut r = Report::new("identities implied by almost compatibility");
    let n = p.dim();
    if !r.check("precondition", ALMOST, || nijenhuis_vanishes(&p.k_endomorphism(), p.rules())) {
        for name in ["connection-exchange", "circ-invariance", "almost-compatible-symmetry"] {
            r.skip(name, ALMOST, "pair is not almost compatible");
        }
        return r;
    }
    let d = delta(p);
    let dl = |k: usize, i: usize, j: usize| &d[(k * n + i) * n + j];
    let (gu, gtu) = (p.g().upper(), p.gt().upper());
    r.check("connection-exchange", "g*(nabla~ - nabla along g~* c) = g~*(nabla~ - nabla along g* c)", || {
        let mut items = Vec::new();
        for m in 0..n {
            for c in 0..n {
                for k in 0..n {
                    let mut v = RationalExpr::zero();
                    for i in 0..n {
                        for j in 0..n {
                            let x = dl(k, i, j);
                            if x.is_zero() {
                                continue;
                            }
                            v = v.add(&gu.get(m, j).mul(gtu.get(c, i)).sub(&gtu.get(m, j).mul(gu.get(c, i))).mul(x));
                        }
                    }
                    items.push((format!("c=dx{}, a=dx{}, component {}", c + 1, k + 1, m + 1), v));
                }
            }
        }
        all_zero_mod(items, p.rules())
    });
    let circ = p.circ();
    r.check("circ-invariance", "g~*(a o b, c) = g~*(a, c o b)", || {
        let mut items = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs: RationalExpr = (0..n).map(|j| circ.get(a, b, j).mul(gtu.get(j, c))).sum();
                    let rhs: RationalExpr = (0..n).map(|j| gtu.get(a, j).mul(circ.get(c, b, j))).sum();
                    items.push((format!("a=dx{}, b=dx{}, c=dx{}", a + 1, b + 1, c + 1), lhs.sub(&rhs)));
                }
            }
        }
        all_zero_mod(items, p.rules())
    });
    let gtl = p.gt().lower();
    r.check("almost-compatible-symmetry", "g*(nabla~_X a - nabla_X a, g~(Y)) symmetric in X, Y", || {
        // value(i, k, a) = -D^a_ij g^jm g~_mk
        let w = gu.mul(gtl);
        let val = |i: usize, k: usize, a: usize| -> RationalExpr { (0..n).map(|j| dl(a, i, j).mul(w.get(j, k))).sum() };
        let mut items = Vec::new();
        for a in 0..n {
            for i in 0..n {
                for k in i + 1..n {
                    items.push((format!("X=d{}, Y=d{}, a=dx{}", i + 1, k + 1, a + 1), val(i, k, a).sub(&val(k, i, a))));
                }
            }
        }
        all_zero_mod(items, p.rules())
    });
    r
}

fn curvature_relation(p: &MetricPair) -> Outcome {
    let n = p.dim();
    let rl = p.pencil_curvature();
    let rg = crate::tensor::riemann(p.gamma_g());
    let rgt = crate::tensor::riemann(p.gamma_gt());
    let (ul, ug, ugt) = (p.pencil_metric().upper(), p.g().upper(), p.gt().upper());
    let lam = lambda();
    let mut items = Vec::new();
    for k in 0..n {
        for i in 0..n {
            for j in i + 1..n {
                for m in 0..n {
                    let mut v = RationalExpr::zero();
                    for l in 0..n {
                        v = v
                            .add(&ul.get(m, l).mul(rl.get(k, l, i, j)))
                            .sub(&ug.get(m, l).mul(rg.get(k, l, i, j)))
                            .sub(&lam.mul(&ugt.get(m, l).mul(rgt.get(k, l, i, j))));
                    }
                    items.push((format!("X=d{}, Y=d{}, a=dx{}, component {}", i + 1, j + 1, k + 1, m + 1), v));
                }
            }
        }
    }
    all_zero_mod(items, p.rules())
}

fn exchange_relation(p: &MetricPair) -> Outcome {
    let n = p.dim();
    let d = delta(p);
    let gu = p.g().upper();
    // S(i, k, a, b) = g^jl D^a_ij D^b_kl
    let s = |i: usize, k: usize, a: usize, b: usize| -> RationalExpr {
        let mut acc = RationalExpr::zero();
        for j in 0..n {
            let x = &d[(a * n + i) * n + j];
            if x.is_zero() {
                continue;
            }
            for l in 0..n {
                let y = &d[(b * n + k) * n + l];
                if !y.is_zero() && !gu.get(j, l).is_zero() {
                    acc = acc.add(&gu.get(j, l).mul(x).mul(y));
                }
            }
        }
        acc
    };
    let mut items = Vec::new();
    for i in 0..n {
        for k in i + 1..n {
            for a in 0..n {
                for b in 0..n {
                    items.push((format!("X=d{}, Y=d{}, a=dx{}, b=dx{}", i + 1, k + 1, a + 1, b + 1), s(i, k, a, b).sub(&s(k, i, a, b))));
                }
            }
        }
    }
    all_zero_mod(items, p.rules())
}

/// Compatibility by the three formulations (curvature relation in `l`,
/// exchange symmetry, associator symmetry of `o`) and their agreement.
pub fn is_compatible(p: &MetricPair) -> Report {
    let mut r = Report::new("compatibility");
    let a = r.check("compatible-curvature", COMPAT, || curvature_relation(p));
    let b = r.check("compatible-exchange", "exchange symmetry of nabla~ - nabla under g*", || exchange_relation(p));
    let c = r.check("compatible-associator", "(a o b) o c = (a o c) o b", || p.circ().exchange_symmetry());
    r.record(
        "compatible-agreement",
        "the formulations of compatibility agree",
        ensure(a == b && b == c, || format!("curvature: {a}, exchange: {b}, associator: {c}")),
    );
    r
}

/// `R^l = 0` identically in `l`, together with the curvature form of
/// compatibility.
pub fn is_flat_pencil(p: &MetricPair) -> Report {
    let mut r = Report::new("flat pencil");
    r.check("compatible-curvature", COMPAT, || curvature_relation(p));
    r.check("pencil-flat", "curvature of g* + l g~* vanishes for every l", || {
        let n = p.dim();
        let r = p.pencil_curvature();
        all_zero_mod(
            (0..n * n * n * n).map(|x| (format!("R^{}_{}{}{}", x / (n * n * n) + 1, (x / (n * n)) % n + 1, (x / n) % n + 1, x % n + 1), r.components()[x].clone())),
            p.rules(),
        )
    });
    r
}
