use super::{MetricPair, MultiplicationTable, PencilError, Space};
use crate::expr::{Poly, RationalExpr};
use crate::report::{all_zero_mod, Report};
use crate::tensor::{Matrix, OneForm, VectorField};

/// The product `u . v = u o T^-1(v)` of a regular pair with vector field `E`.
#[derive(Debug, Clone)]
pub struct Bullet {
    /// `T(u) = g(E) o u`; column `b` holds `T(dx^b)`.
    pub t: Matrix,
    pub det_t: RationalExpr,
    /// Numerator of `det T`: `T` is invertible off its zero set.
    pub locus: Poly,
    pub cotangent: MultiplicationTable,
    /// `X . Y = g~*(g~(X) . g~(Y))`.
    pub tangent: MultiplicationTable,
    /// `g(E)`, the identity of the cotangent product.
    pub identity: OneForm,
    pub report: Report,
}

pub fn bullet_from_pencil(p: &MetricPair, e: &VectorField) -> Result<Bullet, PencilError> {
    p.chart().same(e.chart())?;
    let n = p.dim();
    let circ = p.circ();
    let ge = p.g().flat(e);
    let t = circ.left_multiplication(ge.comps());
    let det_t = p.reduce(&t.det());
    if det_t.is_zero() {
        return Err(PencilError::SingularT);
    }
    let t_inv = t.inverse().map_err(|_| PencilError::SingularT)?;
    let cotangent = MultiplicationTable::from_fn(p.chart(), Space::Cotangent, |a, b, j| {
        (0..n)
            .filter(|&c| !t_inv.get(c, b).is_zero())
            .map(|c| t_inv.get(c, b).mul(circ.get(a, c, j)))
            .sum()
    })
    .with_rules(p.rules().clone());
    let tangent = cotangent.transport(Space::Tangent, p.gt().lower(), p.gt().upper());
    let locus = det_t.numer().primitive_integer().1;

    let mut report = Report::new("product determined by the pencil and E");
    report.fact("det T", &det_t);
    report.check("identity", "g(E) is the identity", || cotangent.identity_element(ge.comps()));
    report.check("commutative", "the product is commutative", || cotangent.commutativity());
    report.check("associative", "the product is associative", || cotangent.associativity());
    report.check("invariance-g", "g is invariant", || cotangent.invariance(p.g().upper()));
    report.check("invariance-g~", "g~ is invariant", || cotangent.invariance(p.gt().upper()));
    report.check("intersection-relation", "g* g~ = E.", || {
        let k = p.g().upper().mul(p.gt().lower());
        let em = tangent.left_multiplication(e.comps());
        all_zero_mod((0..n * n).map(|x| (format!("(g* g~ - E.)[{}][{}]", x / n + 1, x % n + 1), k.entries()[x].sub(&em.entries()[x]))), p.rules())
    });
    Ok(Bullet { t, det_t, locus, cotangent, tangent, identity: ge, report })
}
