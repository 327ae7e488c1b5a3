//! Conformally scaled pencils `(h, h~) = W^2 (g, g~)`: how the Euler field,
//! the products and the quasi-homogeneity constants change under the
//! rescaling, checked on instances.

use crate::expr::{RationalExpr, RuleSet};
use crate::frobenius::{f_manifold_check, lie_derivative_product, proportional, weak_f_manifold_check};
use crate::pencil::{bullet_from_pencil, is_compatible, Bullet, MetricPair, PencilError};
use crate::report::{all_zero_mod, ensure, Outcome, Report, Status};
use crate::tensor::{christoffel, lie_derivative_metric, Matrix, MetricField, OneForm, TensorError, VectorField};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConformalError {
    #[error("conformal factor vanishes identically")]
    ZeroOmega,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// A pair `(g, g~)`, a conformal factor `W`, the rescaled pair
/// `(h, h~) = (W^2 g, W^2 g~)` and an Euler field.
#[derive(Debug, Clone)]
pub struct ScaledPencil {
    pub base: MetricPair,
    pub omega: RationalExpr,
    pub scaled: MetricPair,
    pub euler: VectorField,
}

impl ScaledPencil {
    pub fn new(base: MetricPair, omega: RationalExpr, euler: VectorField) -> Result<ScaledPencil, ConformalError> {
        if omega.is_zero() {
            return Err(ConformalError::ZeroOmega);
        }
        base.chart().same(euler.chart())?;
        let scaled = base.scaled(&omega)?;
        Ok(ScaledPencil { base, omega, scaled, euler })
    }

    pub fn h(&self) -> &MetricField {
        self.scaled.g()
    }

    pub fn ht(&self) -> &MetricField {
        self.scaled.gt()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    fn rules(&self) -> &RuleSet {
        self.base.rules()
    }

    fn reduce(&self, e: &RationalExpr) -> RationalExpr {
        self.base.reduce(e)
    }

    fn is_constant(&self, e: &RationalExpr) -> bool {
        self.base.chart().is_constant(&self.reduce(e))
    }

    /// `dW / W`.
    fn log_differential(&self) -> Vec<RationalExpr> {
        let chart = self.base.chart();
        chart.coords().iter().map(|c| self.omega.diff(c).div(&self.omega)).collect()
    }

    /// `E(W) / W`.
    fn euler_log_derivative(&self) -> RationalExpr {
        self.euler.apply(&self.omega).div(&self.omega)
    }

    fn conformal(&self, g: &MetricField) -> Option<RationalExpr> {
        let l = lie_derivative_metric(&self.euler, g).expect("same chart");
        proportional(l.entries(), g.lower().entries(), self.rules())
    }

    /// `g(E) ^ dW`, which vanishes exactly when `W` is a function of the
    /// coordinate dual to `g(E)`.
    pub fn wedge_term(&self) -> Matrix {
        let ge = self.base.g().flat(&self.euler);
        ge.wedge(&OneForm::differential(self.base.chart(), &self.omega))
    }
}

fn constancy(sp: &ScaledPencil, e: &RationalExpr) -> &'static str {
    if sp.is_constant(e) {
        "constant"
    } else {
        "not constant"
    }
}

/// `D` with `nabla E = (D/2) Id`, if `nabla E` is a multiple of the identity.
fn nabla_euler_scalar(m: &Matrix, rules: &RuleSet) -> Option<RationalExpr> {
    let n = m.rows();
    let id = Matrix::identity(n);
    proportional(m.entries(), id.entries(), rules).map(|p| p.mul(&RationalExpr::from(2)))
}

fn matrix_zero(label: &str, m: &Matrix, rules: &RuleSet) -> Outcome {
    let n = m.cols();
    all_zero_mod(m.entries().iter().enumerate().map(|(x, v)| (format!("{label}[{}][{}]", x / n + 1, x % n + 1), v.clone())), rules)
}

/// The three defining relations of a weak quasi-homogeneous pencil and their
/// constants, without the compatibility precondition.
struct Quasihomogeneity {
    d_tilde: Option<RationalExpr>,
    d: Option<RationalExpr>,
    lie_h: Option<RationalExpr>,
}

impl Quasihomogeneity {
    fn compute(sp: &ScaledPencil) -> Quasihomogeneity {
        let nab = christoffel(sp.h()).nabla_endomorphism(&sp.euler).expect("same chart");
        Quasihomogeneity { d_tilde: sp.conformal(sp.ht()), d: nabla_euler_scalar(&nab, sp.rules()), lie_h: sp.conformal(sp.h()) }
    }

    fn difference(&self) -> Option<RationalExpr> {
        Some(self.d_tilde.as_ref()?.sub(self.d.as_ref()?))
    }

    fn holds(&self, sp: &ScaledPencil) -> bool {
        self.difference().is_some_and(|l| sp.is_constant(&l))
    }

    fn record(&self, sp: &ScaledPencil, r: &mut Report) {
        match &self.d_tilde {
            Some(p) => {
                r.record("euler-rescales-h~", "L_E h~ = D~ h~", Ok(()));
                r.fact("D~", sp.reduce(p));
            }
            None => {
                r.record("euler-rescales-h~", "L_E h~ = D~ h~", Err("L_E h~ is not proportional to h~".into()));
            }
        }
        match &self.d {
            Some(p) => {
                r.record("nabla-euler", "nabla^h E = (D/2) Id", Ok(()));
                r.fact("D", sp.reduce(p));
            }
            None => {
                r.record("nabla-euler", "nabla^h E = (D/2) Id", Err("nabla^h E is not a multiple of the identity".into()));
            }
        }
        match (&self.d, &self.lie_h) {
            (Some(d), Some(l)) => {
                r.record("lie-h-agreement", "L_E h = D h with the same D", ensure(sp.reduce(&d.sub(l)).is_zero(), || format!("L_E h = ({l}) h, D = {d}")));
            }
            (Some(_), None) => {
                r.record("lie-h-agreement", "L_E h = D h with the same D", Err("L_E h is not proportional to h".into()));
            }
            (None, _) => r.skip("lie-h-agreement", "L_E h = D h with the same D", "D is undefined"),
        }
        match self.difference() {
            Some(l) => {
                let l = sp.reduce(&l);
                r.fact("D~ - D", &l);
                r.record("difference-constant", "D~ - D is constant", ensure(sp.is_constant(&l), || format!("D~ - D = {l}")));
            }
            None => r.skip("difference-constant", "D~ - D is constant", "D or D~ is undefined"),
        }
    }
}

/// Conditions for `(h, h~)` with `E` to be a weak quasi-homogeneous pencil:
/// compatibility, `L_E h~ = D~ h~`, `nabla^h E = (D/2) Id`, constancy of
/// `D~ - D`, and regularity of `T`.
pub fn weak_quasihomogeneous_check(sp: &ScaledPencil) -> Report {
    let mut r = Report::new("weak quasi-homogeneous pencil");
    r.absorb("compatible", is_compatible(&sp.scaled));
    Quasihomogeneity::compute(sp).record(sp, &mut r);
    match bullet_from_pencil(&sp.scaled, &sp.euler) {
        Ok(b) => {
            r.fact("det T", &b.det_t);
            r.record("regular", "T(u) = h(E) o u is invertible on an open set", Ok(()));
        }
        Err(e) => {
            r.record("regular", "T(u) = h(E) o u is invertible on an open set", Err(e.to_string()));
        }
    }
    r
}

/// For `E` conformal for both metrics of the scaled pair: `E` rescales the
/// product exactly when `D~ - D` is constant, and the factor is then
/// `D~ - D`.
pub fn proposition_cheie_check(sp: &ScaledPencil) -> Result<Report, ConformalError> {
    let d = sp.conformal(sp.h()).ok_or_else(|| ConformalError::PreconditionFailed("E is not conformal for h".into()))?;
    let dt = sp.conformal(sp.ht()).ok_or_else(|| ConformalError::PreconditionFailed("E is not conformal for h~".into()))?;
    let bullet = bullet_from_pencil(&sp.scaled, &sp.euler)?;
    let mut r = Report::new("rescaling of the product by E");
    let lambda = sp.reduce(&dt.sub(&d));
    r.fact("D", sp.reduce(&d));
    r.fact("D~", sp.reduce(&dt));
    r.fact("D~ - D", &lambda);
    r.fact("assumption", "the chart is connected");
    let constant = sp.is_constant(&lambda);
    let lie = lie_derivative_product(&sp.euler, &bullet.tangent);
    let k = proportional(&lie, bullet.tangent.constants(), sp.rules());
    match &k {
        Some(k) => {
            r.fact("k", k);
            r.fact("k constancy", constancy(sp, k));
            r.record("factor-identity", "L_E(.) = (D~ - D) .", ensure(sp.reduce(&k.sub(&lambda)).is_zero(), || format!("k = {k}, D~ - D = {lambda}")));
        }
        None => {
            r.fact("k", "none");
            r.skip("factor-identity", "L_E(.) = (D~ - D) .", "E does not rescale the product");
        }
    }
    let anchor = "E rescales the product iff D~ - D is constant";
    if sp.dim() >= 3 {
        r.fact("assumption", "dimension at least three");
        r.record("rescales-iff-constant", anchor, ensure(k.is_some() == constant, || format!("rescales: {}, D~ - D constant: {constant}", k.is_some())));
    } else {
        r.skip("rescales-iff-constant", anchor, "requires dimension at least three");
        r.fact("dimension-two exception", k.is_some() && !constant);
    }
    Ok(r)
}

/// `a o_h b = W^-2 [a o_g b + g*(b, f) a - g~*(b, f) g~ g*(a)]` with
/// `f = dW/W`, on coordinate forms.
fn aux_circ(sp: &ScaledPencil) -> Outcome {
    let n = sp.dim();
    let f = sp.log_differential();
    let (g, gt) = (sp.base.g(), sp.base.gt());
    let gf = g.upper().mul_vec(&f);
    let gtf = gt.upper().mul_vec(&f);
    // gtg[j][a] = (g~ g*(dx^a))_j
    let gtg = gt.lower().mul(g.upper());
    let w2 = sp.omega.square();
    let (ch, cg) = (sp.scaled.circ(), sp.base.circ());
    let mut items = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for j in 0..n {
                let mut rhs = cg.get(a, b, j).sub(&gtf[b].mul(gtg.get(j, a)));
                if j == a {
                    rhs = rhs.add(&gf[b]);
                }
                items.push((format!("(dx{} o_h dx{})_{}", a + 1, b + 1, j + 1), ch.get(a, b, j).sub(&rhs.div(&w2))));
            }
        }
    }
    all_zero_mod(items, sp.rules())
}

/// `T~(a) = T(a) + g*(a, f) g(E) - g~*(a, f) g~(E)` with `T(a) = g(E) o_g a`
/// and `T~(a) = h(E) o_h a`.
fn aux_t(sp: &ScaledPencil, bg: &Bullet, bh: &Bullet) -> Outcome {
    let n = sp.dim();
    let f = sp.log_differential();
    let (g, gt) = (sp.base.g(), sp.base.gt());
    let gf = g.upper().mul_vec(&f);
    let gtf = gt.upper().mul_vec(&f);
    let ge = g.flat(&sp.euler);
    let gte = gt.flat(&sp.euler);
    let mut items = Vec::new();
    for b in 0..n {
        for j in 0..n {
            let rhs = bg.t.get(j, b).add(&gf[b].mul(ge.component(j))).sub(&gtf[b].mul(gte.component(j)));
            items.push((format!("T~(dx{})_{}", b + 1, j + 1), bh.t.get(j, b).sub(&rhs)));
        }
    }
    all_zero_mod(items, sp.rules())
}

/// The products of the two pairs coincide on vector fields, and on forms
/// `._h = W^-2 ._g`; with the intermediate formulas for `o_h` and `T~`.
pub fn proposition_mul_check(sp: &ScaledPencil) -> Result<Report, ConformalError> {
    let bg = bullet_from_pencil(&sp.base, &sp.euler)?;
    let bh = bullet_from_pencil(&sp.scaled, &sp.euler)?;
    let n = sp.dim();
    let mut r = Report::new("products of a conformally scaled pair");
    r.check("exchange-symmetry", "(a o_h b) o_h c = (a o_h c) o_h b", || sp.scaled.circ().exchange_symmetry());
    r.check("aux-circ", "a o_h b = W^-2 [a o_g b + g*(b, dW/W) a - g~*(b, dW/W) g~ g*(a)]", || aux_circ(sp));
    r.check("aux-t", "T~(a) = T(a) + g*(a, dW/W) g(E) - g~*(a, dW/W) g~(E)", || aux_t(sp, &bg, &bh));
    let w2 = sp.omega.square();
    r.check("cotangent-scaled", "._h = W^-2 ._g on forms", || {
        let items = (0..n * n * n).map(|x| {
            let (a, b, j) = (x / (n * n), (x / n) % n, x % n);
            (format!("(dx{} ._h dx{})_{}", a + 1, b + 1, j + 1), bh.cotangent.get(a, b, j).sub(&bg.cotangent.get(a, b, j).div(&w2)))
        });
        all_zero_mod(items, sp.rules())
    });
    r.check("tangent-equal", "._h = ._g on vector fields", || bh.tangent.compare(&bg.tangent));
    Ok(r)
}

/// The four statements about a conformal rescaling of a Frobenius flat
/// pencil, each evaluated on its own:
/// (1) `(h, h~)` is weak quasi-homogeneous, (2) `g(E) ^ dW = 0`,
/// (3) `(M, ., h~, E)` is an F-manifold, (4) it is a weak F-manifold.
/// Also checks the formulas for `L_E h`, `L_E h~` and `nabla^h E` in terms
/// of `W`.
pub fn proposition_f_check(sp: &ScaledPencil) -> Result<Report, ConformalError> {
    let n = sp.dim();
    let rules = sp.rules().clone();
    let mut r = Report::new("equivalent conditions on the conformal factor");
    r.fact("W", &sp.omega);
    let bg = bullet_from_pencil(&sp.base, &sp.euler)?;
    let table = bg.tangent.clone().with_rules(rules.clone());
    let ew = sp.euler_log_derivative();

    let dg = sp.conformal(sp.base.g());
    let dgt = sp.conformal(sp.base.gt());
    match (&dg, &dgt) {
        (Some(dg), Some(dgt)) => {
            r.fact("1 - d", sp.reduce(dg));
            let two = RationalExpr::from(2);
            let want_h = dg.add(&ew.mul(&two));
            let want_ht = dgt.add(&ew.mul(&two));
            r.check("factor-h", "L_E h = ((1 - d) + 2 E(W)/W) h", || {
                let l = lie_derivative_metric(&sp.euler, sp.h()).expect("same chart");
                matrix_zero("L_E h - D_h h", &l.sub(&sp.h().lower().scale(&want_h)), &rules)
            });
            r.check("factor-h~", "L_E h~ = (D + 2 E(W)/W) h~", || {
                let l = lie_derivative_metric(&sp.euler, sp.ht()).expect("same chart");
                matrix_zero("L_E h~ - D_h~ h~", &l.sub(&sp.ht().lower().scale(&want_ht)), &rules)
            });
            r.record("factor-difference", "D_h~ - D_h is constant", ensure(sp.is_constant(&want_ht.sub(&want_h)), || format!("{}", sp.reduce(&want_ht.sub(&want_h)))));
            r.check("nabla-euler-decomposition", "nabla^h_X E = ((1 - d)/2 + E(W)/W) X - (E ^ g*(dW/W))(g(X))", || {
                let nab = christoffel(sp.h()).nabla_endomorphism(&sp.euler).expect("same chart");
                let f = sp.log_differential();
                let v = sp.base.g().upper().mul_vec(&f);
                let ge = sp.base.g().flat(&sp.euler);
                let diag = dg.div(&two).add(&ew);
                let pred = Matrix::from_fn(n, n, |k, j| {
                    let mut x = ge.component(j).mul(&v[k]).neg().add(&f[j].mul(sp.euler.component(k)));
                    if k == j {
                        x = x.add(&diag);
                    }
                    x
                });
                matrix_zero("nabla^h E - prediction", &nab.sub(&pred), &rules)
            });
        }
        _ => {
            for name in ["factor-h", "factor-h~", "factor-difference", "nabla-euler-decomposition"] {
                r.skip(name, "conformal factors of the base pair", "E is not conformal for g and g~");
            }
        }
    }

    let qh = Quasihomogeneity::compute(sp);
    let s1 = qh.holds(sp);
    let s2 = matrix_zero("g(E) ^ dW", &sp.wedge_term(), &rules).is_ok();
    let fm = f_manifold_check(sp.ht(), &table, &sp.euler);
    let s3 = fm.status("nabla-product-symmetric") == Some(Status::Pass);
    let wf = weak_f_manifold_check(sp.ht(), &table, &sp.euler);
    let s4 = wf.passed();
    r.fact("weak quasi-homogeneous", s1);
    r.fact("g(E) ^ dW = 0", s2);
    r.fact("F-manifold", s3);
    r.fact("weak F-manifold", s4);
    let anchor = "the four statements are equivalent";
    r.record("equivalence", anchor, ensure(s1 == s2 && s2 == s3 && s3 == s4, || format!("(1) {s1}, (2) {s2}, (3) {s3}, (4) {s4}")));
    for (name, sub) in [("weak F-manifold", &wf), ("F-manifold", &fm)] {
        if let Some(f) = sub.failures().next() {
            r.fact(&format!("{name} witness"), format!("{}: {}", f.name, f.witness.as_deref().unwrap_or("")));
        }
    }
    Ok(r)
}

/// Per-statement values of [`proposition_f_check`], in order.
pub fn statements(report: &Report) -> Option<[bool; 4]> {
    let get = |k: &str| report.fact_value(k).map(|v| v == "true");
    Some([get("weak quasi-homogeneous")?, get("g(E) ^ dW = 0")?, get("F-manifold")?, get("weak F-manifold")?])
}
