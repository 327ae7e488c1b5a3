use super::manifold::lie_derivative_product;
use super::{check_wdvv, FrobeniusError, Prepotential};
use crate::expr::RationalExpr;
use crate::pencil::{bullet_from_pencil, is_compatible, is_flat_pencil, MetricPair, MultiplicationTable, Space};
use crate::report::{all_zero_mod, Report};
use crate::tensor::{lie_derivative_metric, Matrix, MetricField, VectorField};

/// The product `d_i . d_j = c^k_ij d_k` with `c^k_ij = eta^kl F_ijl`.
#[derive(Debug, Clone)]
pub struct FrobeniusStructure {
    pub prepotential: Prepotential,
    pub table: MultiplicationTable,
    pub identity: VectorField,
    pub report: Report,
}

fn proportional(a: &[RationalExpr], b: &[RationalExpr], p: &Prepotential) -> Option<RationalExpr> {
    let mut k: Option<RationalExpr> = None;
    for (x, y) in a.iter().zip(b) {
        if y.is_zero() {
            if !p.reduce(x).is_zero() {
                return None;
            }
            continue;
        }
        match &k {
            None => k = Some(p.reduce(&x.div(y))),
            Some(k) => {
                if !p.reduce(&x.sub(&y.mul(k))).is_zero() {
                    return None;
                }
            }
        }
    }
    Some(k.unwrap_or_else(RationalExpr::zero))
}

/// Builds the multiplication of a WDVV solution and checks the Frobenius
/// manifold axioms, including those involving `E` when it is present.
pub fn frobenius_from_prepotential(p: &Prepotential) -> Result<FrobeniusStructure, FrobeniusError> {
    let wdvv = check_wdvv(p)?;
    if let Some(w) = wdvv.failures().next() {
        return Err(FrobeniusError::WdvvFailed(w.witness.clone().unwrap_or_default()));
    }
    let chart = p.chart();
    let n = p.dim();
    let up = p.eta().upper();
    let table = MultiplicationTable::from_fn(chart, Space::Tangent, |i, j, k| {
        (0..n).filter(|&l| !up.get(k, l).is_zero()).map(|l| up.get(k, l).mul(p.third(i, j, l))).sum()
    })
    .with_rules(p.rules().clone());
    let identity = VectorField::basis(chart, 0);
    let mut report = Report::new("Frobenius structure");
    report.absorb("", wdvv);
    report.check("commutative", "the product is commutative", || table.commutativity());
    report.check("associative", "the product is associative", || table.associativity());
    report.check("identity", "d/dt1 is the identity", || table.identity_element(identity.comps()));
    report.check("eta-invariance", "eta(X.Y, Z) = eta(X, Y.Z)", || table.invariance(p.eta().lower()));
    report.check("nabla-product-symmetric", "nabla c is totally symmetric", || {
        let mut items = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        let d = p.third(j, k, m).diff(chart.coord(i)).sub(&p.third(i, k, m).diff(chart.coord(j)));
                        items.push((format!("({},{},{},{})", i + 1, j + 1, k + 1, m + 1), d));
                    }
                }
            }
        }
        all_zero_mod(items, p.rules())
    });
    match p.euler() {
        Some(e) => {
            report.check("euler-linear", "nabla nabla E = 0", || {
                let mut items = Vec::new();
                for k in 0..n {
                    for i in 0..n {
                        for j in i..n {
                            items.push((format!("d{}d{} E^{}", i + 1, j + 1, k + 1), e.component(k).diff(chart.coord(i)).diff(chart.coord(j))));
                        }
                    }
                }
                all_zero_mod(items, p.rules())
            });
            let le = lie_derivative_metric(e, p.eta())?;
            match proportional(le.entries(), p.eta().lower().entries(), p).filter(|d| chart.is_constant(d)) {
                Some(d) => {
                    report.record("euler-eta", "L_E eta = D eta with D constant", Ok(()));
                    report.fact("D", &d);
                }
                None => {
                    report.record("euler-eta", "L_E eta = D eta with D constant", Err("L_E eta is not a constant multiple of eta".into()));
                }
            }
            let lc = lie_derivative_product(e, &table);
            match proportional(&lc, table.constants(), p).filter(|k| chart.is_constant(k)) {
                Some(k) => {
                    report.record("euler-product", "L_E(.) = k . with k constant", Ok(()));
                    report.fact("k", &k);
                }
                None => {
                    report.record("euler-product", "L_E(.) = k . with k constant", Err("L_E(.) is not a constant multiple of the product".into()));
                }
            }
        }
        None => {
            for name in ["euler-linear", "euler-eta", "euler-product"] {
                report.skip(name, "Euler field conditions", "no Euler field");
            }
        }
    }
    Ok(FrobeniusStructure { prepotential: p.clone(), table, identity, report })
}

/// The intersection form `g^ij = E^k eta^ia eta^jb F_kab` and the pencil it
/// spans with `eta`.
#[derive(Debug, Clone)]
pub struct IntersectionForm {
    pub g: MetricField,
    pub pair: MetricPair,
    pub report: Report,
}

/// Computes the intersection form and checks that it is a flat pencil with
/// `eta` whose product, built from `E`, is the Frobenius product.
pub fn intersection_form(s: &FrobeniusStructure) -> Result<IntersectionForm, FrobeniusError> {
    let p = &s.prepotential;
    let e = p.euler().ok_or(FrobeniusError::MissingEuler)?;
    let chart = p.chart();
    let n = p.dim();
    let up = p.eta().upper();
    let upper = Matrix::from_fn(n, n, |i, j| {
        let mut acc = RationalExpr::zero();
        for a in 0..n {
            if up.get(i, a).is_zero() {
                continue;
            }
            for b in 0..n {
                if up.get(j, b).is_zero() {
                    continue;
                }
                let eab: RationalExpr = (0..n).filter(|&k| !e.component(k).is_zero()).map(|k| e.component(k).mul(p.third(k, a, b))).sum();
                acc = acc.add(&up.get(i, a).mul(up.get(j, b)).mul(&eab));
            }
        }
        p.reduce(&acc)
    });
    let mut report = Report::new("intersection form");
    report.check("symmetric", "g^ij = g^ji", || {
        all_zero_mod((0..n * n).filter(|x| x / n < x % n).map(|x| (format!("g^{}{}", x / n + 1, x % n + 1), upper.get(x / n, x % n).sub(upper.get(x % n, x / n)))), p.rules())
    });
    let g = MetricField::contravariant(chart, upper)?;
    let pair = MetricPair::new(g.clone(), p.eta().clone())?.with_rules(p.rules().clone());
    report.absorb("", is_compatible(&pair));
    report.absorb("", is_flat_pencil(&pair));
    match bullet_from_pencil(&pair, e) {
        Ok(b) => {
            report.fact("det T", &b.det_t);
            report.check("pencil-product", "the product built from the pencil and E is the Frobenius product", || b.tangent.compare(&s.table));
        }
        Err(err) => {
            report.record("pencil-product", "the product built from the pencil and E is the Frobenius product", Err(err.to_string()));
        }
    }
    Ok(IntersectionForm { g, pair, report })
}
