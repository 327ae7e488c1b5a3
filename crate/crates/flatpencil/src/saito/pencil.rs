use super::pushforward::{express_in_invariants, in_x, invariant_chart, pushforward_metric, round_trip};
use super::{CoxeterDatum, SaitoError};
use crate::conformal::{weak_quasihomogeneous_check, ScaledPencil};
use crate::expr::{Poly, Rational, RationalExpr, RuleSet};
use crate::frobenius::{f_manifold_check, integrate_third_derivatives, Prepotential};
use crate::pencil::{bullet_from_pencil, is_flat_pencil, MetricPair};
use crate::report::{all_zero, ensure, Report};
use crate::tensor::{christoffel, constant_sectional_curvature, lie_derivative_metric, lie_derivative_upper, riemann, Matrix, MetricField, VectorField};

/// The Saito pencil of a Coxeter group in a normalized invariant basis.
#[derive(Debug, Clone)]
pub struct SaitoPencil {
    /// The datum with its invariants rescaled into the normalized basis.
    pub datum: CoxeterDatum,
    /// Factors `l_i` with normalized `t^i = l_i` times the catalog invariant.
    pub scalings: Vec<Rational>,
    /// `nu` with `g~* = nu sum d_i d_(n+1-i)`; the last invariant keeps
    /// `t^n = sum (x^i)^2`, which fixes `nu = 2 d_1`.
    pub normalization: Rational,
    /// `(g, g~)` with `g~* = Lie_e g*`.
    pub pair: MetricPair,
    /// `E = sum d_i t^i d_i`.
    pub euler: VectorField,
    /// `e = d/dt^1`.
    pub unit: VectorField,
    pub report: Report,
}

fn antidiagonal_entries(m: &Matrix) -> Result<Vec<Rational>, String> {
    let n = m.rows();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j);
            if i + j + 1 == n {
                match v.constant_value() {
                    Some(c) if !c.is_zero() => out.push(c),
                    _ => return Err(format!("Lie_e g*[{}][{}] = {v} is not a nonzero constant", i + 1, j + 1)),
                }
            } else if !v.is_zero() {
                return Err(format!("Lie_e g*[{}][{}] = {v} off the anti-diagonal", i + 1, j + 1));
            }
        }
    }
    Ok(out)
}

/// Scalings `l` with `l_n = 1` making every anti-diagonal entry of
/// `Lie_e g*` equal to the first; `t^i -> l_i t^i` multiplies entry `i` by
/// `l_i l_(n+1-i) / l_1`.
fn scalings(a: &[Rational]) -> Vec<Rational> {
    let n = a.len();
    let mut l = vec![Rational::one(); n];
    if n % 2 == 1 {
        let m = n / 2;
        l[0] = &a[m] / &a[0];
    }
    for i in 1..n / 2 {
        l[n - 1 - i] = &(&l[0] * &a[0]) / &a[i];
    }
    l
}

/// The pushforward pencil `(g, Lie_e g)` in a basis where `Lie_e g*` is a
/// constant multiple of the unit anti-diagonal, with its checks: flat
/// pencil, `L_E g~ = (d_1 + 2) g~`, `L_E g = 2 g` and `g(E) = dt^n / 2`.
pub fn saito_pencil(cd: &CoxeterDatum) -> Result<SaitoPencil, SaitoError> {
    let n = cd.rank();
    let raw = pushforward_metric(cd)?;
    let a = antidiagonal_entries(&raw.upper().diff("t1")).map_err(|m| SaitoError::NormalizationFailed(cd.name.clone(), m))?;
    let l = scalings(&a);
    let mut datum = cd.clone();
    datum.invariants = cd.invariants.iter().zip(&l).map(|(t, s)| t.scale(s)).collect();
    let g = if l.iter().all(Rational::is_one) { raw } else { pushforward_metric(&datum)? };
    let chart = invariant_chart(&datum);
    let gt_upper = g.upper().diff("t1");
    let nu = a[0].clone();
    let nu_e = RationalExpr::constant(nu.clone());
    let gt = MetricField::contravariant(&chart, gt_upper)?;
    let pair = MetricPair::new(g.clone(), gt.clone())?;
    let degrees: Vec<RationalExpr> = datum.degrees.iter().map(|&d| RationalExpr::int(i64::from(d))).collect();
    let euler = VectorField::euler(&chart, &degrees);
    let unit = VectorField::basis(&chart, 0);

    let mut report = Report::new(format!("Saito pencil of {}", datum.name));
    report.fact("normalization", &nu);
    report.fact("scalings", l.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "));
    report.check("round-trip", "the rewritten metric is the pushforward of sum (dx^i)^2", || round_trip(&datum, &g));
    report.check("lie-e", "g~* = Lie_e g*", || {
        let lie = lie_derivative_upper(&unit, g.upper()).expect("same chart");
        all_zero((0..n * n).map(|x| (format!("g~*[{}][{}]", x / n + 1, x % n + 1), lie.entries()[x].sub(&gt.upper().entries()[x]))))
    });
    report.check("anti-diagonal", "g~* is a constant multiple of the unit anti-diagonal", || {
        let want = Matrix::antidiagonal(n).scale(&nu_e);
        all_zero((0..n * n).map(|x| (format!("g~*[{}][{}]", x / n + 1, x % n + 1), gt.upper().entries()[x].sub(&want.entries()[x]))))
    });
    report.check("degree-duality", "d_i + d_(n+1-i) = d_1 + 2", || {
        ensure((0..n).all(|i| datum.degrees[i] + datum.degrees[n - 1 - i] == datum.degrees[0] + 2), || "degrees are not dual".into())
    });
    report.absorb("flat-pencil", is_flat_pencil(&pair));
    let h = datum.coxeter_number();
    report.check("euler-g~", "L_E g~ = (d_1 + 2) g~", || {
        let l = lie_derivative_metric(&euler, &gt).expect("same chart");
        let k = RationalExpr::int(i64::from(h + 2));
        all_zero(l.entries().iter().zip(gt.lower().entries()).enumerate().map(|(x, (a, b))| (format!("entry {x}"), a.sub(&b.mul(&k)))))
    });
    report.check("euler-g", "L_E g = 2 g", || {
        let l = lie_derivative_metric(&euler, &g).expect("same chart");
        all_zero(l.entries().iter().zip(g.lower().entries()).enumerate().map(|(x, (a, b))| (format!("entry {x}"), a.sub(&b.scale(&Rational::from(2))))))
    });
    let ge = g.flat(&euler);
    report.fact("g(E)", ge.comps().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "));
    report.check("g(E)", "g(E) is a constant multiple of dt^n", || {
        all_zero(ge.comps()[..n - 1].iter().enumerate().map(|(i, c)| (format!("g(E)_{}", i + 1), c.clone())))?;
        ensure(ge.comps()[n - 1].constant_value().is_some_and(|c| !c.is_zero()), || format!("g(E)_{n} = {}", ge.comps()[n - 1]))
    });
    Ok(SaitoPencil { datum, scalings: l, normalization: nu, pair, euler, unit, report })
}

/// A Frobenius prepotential of the Saito pencil with `eta = g~`, from the
/// structure constants of the product `u . v = u o T^-1(v)`, normalized so
/// that `e` is the identity. The Euler field is `E / d_1`, for which the
/// intersection form of the prepotential is `g` itself.
pub fn saito_prepotential(sp: &SaitoPencil) -> Result<Prepotential, SaitoError> {
    let n = sp.pair.dim();
    let chart = sp.pair.chart();
    let bullet = bullet_from_pencil(&sp.pair, &sp.euler)?;
    let eta = sp.pair.gt().lower().clone();
    let mut c = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                c.push((0..n).map(|m| bullet.tangent.get(i, j, m).mul(eta.get(m, k))).sum::<RationalExpr>());
            }
        }
    }
    let kappa = eta.get(0, n - 1).div(&c[n - 1]);
    if !chart.is_constant(&kappa) {
        return Err(SaitoError::NormalizationFailed(sp.datum.name.clone(), "d/dt^1 is not proportional to the identity".into()));
    }
    let c: Vec<RationalExpr> = c.iter().map(|x| x.mul(&kappa)).collect();
    let f = integrate_third_derivatives(chart, &c).map_err(|e| SaitoError::Frobenius(e.to_string()))?;
    let h = Rational::from(i64::from(sp.datum.coxeter_number()));
    let euler = sp.euler.scale(&RationalExpr::constant(h.recip()));
    Prepotential::new(chart, f, eta, Some(euler), RuleSet::empty()).map_err(|e| SaitoError::Frobenius(e.to_string()))
}

/// The Saito pencil rescaled by `W = (c t^n + d)^-1`.
#[derive(Debug, Clone)]
pub struct ModifiedSaito {
    pub saito: SaitoPencil,
    pub c: RationalExpr,
    pub d: RationalExpr,
    pub pencil: ScaledPencil,
    pub report: Report,
}

impl ModifiedSaito {
    /// `c t^n + d`.
    pub fn linear_factor(&self) -> RationalExpr {
        let n = self.saito.pair.dim();
        self.c.mul(&RationalExpr::var(self.saito.pair.chart().coord(n - 1))).add(&self.d)
    }
}

/// Which parts of [`modified_saito`] to verify; the compatibility and
/// weak quasi-homogeneity checks dominate the cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModifiedChecks {
    pub curvature: bool,
    pub compatibility: bool,
    pub f_manifold: bool,
    pub ambient: bool,
}

impl Default for ModifiedChecks {
    fn default() -> Self {
        ModifiedChecks { curvature: true, compatibility: true, f_manifold: true, ambient: true }
    }
}

/// `(h, h~) = (c t^n + d)^-2 (g, g~)` with its checks: `h~` flat, `h` of
/// constant sectional curvature `4cd`, the pair compatible but not a flat
/// pencil, weak quasi-homogeneous with `E`, `(M, ., h~, E)` an F-manifold,
/// and `h` the pushforward of `(c sum (x^i)^2 + d)^-2 sum (dx^i)^2`.
pub fn modified_saito(sp: &SaitoPencil, c: &RationalExpr, d: &RationalExpr) -> Result<ModifiedSaito, SaitoError> {
    modified_saito_with(sp, c, d, ModifiedChecks::default())
}

pub fn modified_saito_with(sp: &SaitoPencil, c: &RationalExpr, d: &RationalExpr, checks: ModifiedChecks) -> Result<ModifiedSaito, SaitoError> {
    if c.is_zero() && d.is_zero() {
        return Err(SaitoError::InvalidParameters("c and d both vanish".into()));
    }
    let chart = sp.pair.chart().clone();
    let n = chart.dim();
    for p in [c, d] {
        if !chart.is_constant(p) {
            return Err(SaitoError::InvalidParameters(format!("{p} depends on the coordinates")));
        }
    }
    let lin = c.mul(&RationalExpr::var(chart.coord(n - 1))).add(d);
    let omega = lin.recip()?;
    let pencil = ScaledPencil::new(sp.pair.clone(), omega, sp.euler.clone())?;
    let mut r = Report::new(format!("modified Saito pencil of {}", sp.datum.name));
    r.fact("W", &pencil.omega);
    let s = c.mul(d).scale(&Rational::from(4));
    if checks.curvature {
        r.check("h~-flat", "the metric h~ is flat", || riemann(&christoffel(pencil.ht())).vanishes());
        let k = constant_sectional_curvature(pencil.h());
        r.fact("sectional curvature", k.as_ref().map_or_else(|| "not constant".to_string(), |k| k.to_string()));
        r.record(
            "sectional-curvature",
            "h has constant sectional curvature 4cd",
            ensure(k.as_ref() == Some(&s), || format!("found {}", k.as_ref().map_or_else(|| "non-constant curvature".into(), |k| k.to_string()))),
        );
    }
    if checks.compatibility {
        r.absorb("weak-qh", weak_quasihomogeneous_check(&pencil));
        if c.is_zero() || d.is_zero() {
            r.skip("not-flat-pencil", "the modified pair is not a flat pencil", "W is a power of a coordinate or constant");
        } else {
            r.record("not-flat-pencil", "the modified pair is not a flat pencil", ensure(!pencil.scaled.pencil_curvature().is_zero(), || "R^lambda vanishes".into()));
        }
    }
    if checks.f_manifold {
        let bullet = bullet_from_pencil(&pencil.scaled, &pencil.euler)?;
        r.absorb("f", f_manifold_check(pencil.ht(), &bullet.tangent, &pencil.euler));
    }
    if checks.ambient {
        r.check("ambient", "h is the pushforward of (c sum (x^i)^2 + d)^-2 sum (dx^i)^2", || {
            let hx = in_x(&sp.datum, pencil.h().upper()).map_err(|e| e.to_string())?;
            let norm: RationalExpr = sp.datum.coords.iter().map(|x| RationalExpr::var(x).square()).sum();
            let factor = c.mul(&norm).add(d).square();
            let gx = super::pushforward::pushforward_in_x(&sp.datum);
            all_zero((0..n * n).map(|x| (format!("h^{}{}", x / n + 1, x % n + 1), hx.entries()[x].sub(&gx.entries()[x].mul(&factor)))))
        });
    }
    Ok(ModifiedSaito { saito: sp.clone(), c: c.clone(), d: d.clone(), pencil, report: r })
}

/// Where `T(u) = h(E) o u` of a modified Saito pencil degenerates.
#[derive(Debug, Clone)]
pub struct RegularityLocus {
    pub det_t: RationalExpr,
    /// Values of `t^n` excluded from the regular set, with the multiplicity
    /// of the corresponding factor of `det T`.
    pub excluded: Vec<(RationalExpr, u32)>,
    pub report: Report,
}

fn strip(p: &Poly, f: &Poly) -> (Poly, u32) {
    let mut p = p.clone();
    let mut k = 0;
    while let Some(q) = p.div_exact(f) {
        p = q;
        k += 1;
    }
    (p, k)
}

/// The predicted factorization of `det T` into `t^n = d/c` and
/// `t^n = (1 - d_1) d / ((1 + d_1) c)`, and the closed form
/// `T(u) = sum ((d_i - 1) u_i + c u_1 d_(n-i+1) t^(n-i+1) / (c t^n + d)) dt^i - c u(E) / (c t^n + d) dt^n`.
pub fn regularity_locus(ms: &ModifiedSaito) -> Result<RegularityLocus, SaitoError> {
    let pencil = &ms.pencil;
    let chart = pencil.base.chart();
    let n = chart.dim();
    let coords = chart.coords();
    let bullet = bullet_from_pencil(&pencil.scaled, &pencil.euler)?;
    let mut r = Report::new(format!("regularity of the modified Saito pencil of {}", ms.saito.datum.name));
    r.fact("det T", &bullet.det_t);
    let deg: Vec<RationalExpr> = ms.saito.datum.degrees.iter().map(|&d| RationalExpr::int(i64::from(d))).collect();
    let t: Vec<RationalExpr> = chart.coord_exprs();
    let lin = ms.linear_factor();
    let (c, d) = (&ms.c, &ms.d);
    r.check("t-formula", "T(u) = sum ((d_i - 1) u_i + c u_1 d_(n-i+1) t^(n-i+1)/(c t^n + d)) dt^i - c u(E)/(c t^n + d) dt^n", || {
        let mut items = Vec::new();
        for b in 0..n {
            for j in 0..n {
                let mut want = RationalExpr::zero();
                if j == b {
                    want = want.add(&deg[j].sub(&RationalExpr::one()));
                }
                if b == 0 {
                    want = want.add(&c.mul(&deg[n - 1 - j]).mul(&t[n - 1 - j]).div(&lin));
                }
                if j == n - 1 {
                    want = want.sub(&c.mul(&deg[b]).mul(&t[b]).div(&lin));
                }
                items.push((format!("T(dt{})_{}", b + 1, j + 1), bullet.t.get(j, b).sub(&want)));
            }
        }
        all_zero(items)
    });
    let h = RationalExpr::int(i64::from(ms.saito.datum.coxeter_number()));
    let one = RationalExpr::one();
    let tn = &t[n - 1];
    let mut rest = bullet.det_t.numer().clone();
    let mut excluded = Vec::new();
    let mut missing = Vec::new();
    if !c.is_zero() {
        let candidates = [
            (c.mul(tn).sub(d), d.div(c)),
            (one.add(&h).mul(c).mul(tn).sub(&one.sub(&h).mul(d)), one.sub(&h).mul(d).div(&one.add(&h).mul(c))),
        ];
        for (factor, value) in candidates {
            let (q, k) = strip(&rest, factor.numer());
            rest = q;
            if k == 0 {
                missing.push(factor.to_string());
            } else {
                excluded.push((value, k));
            }
        }
    }
    for (v, k) in &excluded {
        r.fact("excluded", format!("t{n} = {v} (multiplicity {k})"));
    }
    r.record("loci-present", "both excluded loci divide det T", ensure(missing.is_empty(), || format!("missing factors: {}", missing.join(", "))));
    let unit = RationalExpr::from_poly(rest);
    r.record("det-t-factorization", "det T vanishes exactly on the excluded loci", ensure(unit.is_free_of(coords), || format!("remaining factor {unit}")));
    Ok(RegularityLocus { det_t: bullet.det_t, excluded, report: r })
}

/// A `W`-invariant polynomial in `x` of the given weighted degree, written
/// in the invariants.
pub fn rewrite(cd: &CoxeterDatum, p: &RationalExpr, weighted_degree: u32) -> Result<RationalExpr, SaitoError> {
    if !p.is_polynomial() {
        return Err(SaitoError::RewriteFailed(format!("{p} is not a polynomial")));
    }
    express_in_invariants(cd, &invariant_chart(cd), p.numer(), weighted_degree)
}
