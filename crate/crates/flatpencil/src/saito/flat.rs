use std::collections::BTreeMap;

use super::SaitoError;
use crate::expr::{Rational, RationalExpr};
use crate::report::{all_zero, Report};
use crate::tensor::{Chart, Matrix};

/// Möbius parameters with `ad - bc = 1` enforced.
#[derive(Debug, Clone, PartialEq)]
pub struct Unimodular {
    pub a: RationalExpr,
    pub b: RationalExpr,
    pub c: RationalExpr,
    pub d: RationalExpr,
    /// Parameter eliminated to impose the determinant condition, if any.
    pub elimination: BTreeMap<String, RationalExpr>,
}

impl Unimodular {
    /// Imposes `ad - bc = 1`. When the determinant is not already one and
    /// `a` (or else `d`) is a bare symbol, that symbol is solved for.
    pub fn new(a: &RationalExpr, b: &RationalExpr, c: &RationalExpr, d: &RationalExpr) -> Result<Unimodular, SaitoError> {
        let det = a.mul(d).sub(&b.mul(c));
        let plain = Unimodular { a: a.clone(), b: b.clone(), c: c.clone(), d: d.clone(), elimination: BTreeMap::new() };
        if det.is_one() {
            return Ok(plain);
        }
        if det.constant_value().is_some() {
            return Err(SaitoError::DeterminantNotOne(det.to_string()));
        }
        let one_plus_bc = RationalExpr::one().add(&b.mul(c));
        for (sym, other) in [(a, d), (d, a)] {
            let Some(name) = bare_symbol(sym) else { continue };
            if other.is_zero() || other.depends_on(&name) || b.depends_on(&name) || c.depends_on(&name) {
                continue;
            }
            let value = one_plus_bc.div(other);
            let elimination = BTreeMap::from([(name, value)]);
            let sub = |e: &RationalExpr| e.substitute(&elimination).expect("denominator is a nonzero parameter");
            let out = Unimodular { a: sub(a), b: b.clone(), c: c.clone(), d: sub(d), elimination: elimination.clone() };
            debug_assert!(out.a.mul(&out.d).sub(&out.b.mul(&out.c)).is_one());
            return Ok(out);
        }
        Err(SaitoError::DeterminantNotOne(det.to_string()))
    }

    pub fn identity() -> Unimodular {
        Unimodular {
            a: RationalExpr::one(),
            b: RationalExpr::zero(),
            c: RationalExpr::zero(),
            d: RationalExpr::one(),
            elimination: BTreeMap::new(),
        }
    }

    /// Applies the recorded elimination to an expression in the original
    /// parameters.
    pub fn eliminate(&self, e: &RationalExpr) -> RationalExpr {
        e.substitute(&self.elimination).unwrap_or_else(|_| e.clone())
    }
}

fn bare_symbol(e: &RationalExpr) -> Option<String> {
    let p = e.numer();
    if !e.denom().is_one() || p.nterms() != 1 || p.total_degree() != 1 || !p.leading_coeff().is_one() {
        return None;
    }
    p.vars()[0].as_var().map(str::to_string)
}

/// Flat coordinates of `h~ = (c t^n + d)^-2 sum dt^i dt^(n+1-i)`.
#[derive(Debug, Clone)]
pub struct FlatCoordinates {
    pub source: Chart,
    pub target: Chart,
    pub params: Unimodular,
    /// `t~^i` as functions of `t`.
    pub forward: Vec<RationalExpr>,
    /// `t^i` as functions of `t~`.
    pub inverse: Vec<RationalExpr>,
    pub report: Report,
}

impl FlatCoordinates {
    pub fn forward_map(&self) -> BTreeMap<String, RationalExpr> {
        self.target.coords().iter().cloned().zip(self.forward.iter().cloned()).collect()
    }

    pub fn inverse_map(&self) -> BTreeMap<String, RationalExpr> {
        self.source.coords().iter().cloned().zip(self.inverse.iter().cloned()).collect()
    }

    /// `(c t^n + d)^-1` in the source chart.
    pub fn omega(&self) -> RationalExpr {
        let n = self.source.dim();
        self.params.c.mul(&RationalExpr::var(self.source.coord(n - 1))).add(&self.params.d).recip().expect("c t^n + d is nonzero")
    }
}

/// The map `t -> t~` with
/// `t~^1 = t^1 + c/(2(c t^n + d)) sum_{1<i<n} t^i t^(n+1-i)`,
/// `t~^i = t^i/(c t^n + d)` and `t~^n = (a t^n + b)/(c t^n + d)`, with its
/// inverse, checked by composing both ways and by pulling back the flat form.
pub fn flat_coordinate_map(
    source: &Chart,
    target: &Chart,
    a: &RationalExpr,
    b: &RationalExpr,
    c: &RationalExpr,
    d: &RationalExpr,
) -> Result<FlatCoordinates, SaitoError> {
    let n = source.dim();
    if target.dim() != n {
        return Err(SaitoError::DimensionMismatch(n, target.dim()));
    }
    if n < 2 {
        return Err(SaitoError::DimensionMismatch(2, n));
    }
    let params = Unimodular::new(a, b, c, d)?;
    let (a, b, c, d) = (&params.a, &params.b, &params.c, &params.d);
    if c.is_zero() && d.is_zero() {
        return Err(SaitoError::DeterminantNotOne("0".into()));
    }
    let t = source.coord_exprs();
    let s = target.coord_exprs();
    let den = c.mul(&t[n - 1]).add(d);
    let middle: RationalExpr = (1..n - 1).map(|i| t[i].mul(&t[n - 1 - i])).sum();
    let mut forward = Vec::with_capacity(n);
    forward.push(t[0].add(&c.mul(&middle).div(&den.mul(&RationalExpr::int(2)))));
    for ti in &t[1..n - 1] {
        forward.push(ti.div(&den));
    }
    forward.push(a.mul(&t[n - 1]).add(b).div(&den));

    // c t^n + d = 1/(a - c s^n)
    let fac = a.sub(&c.mul(&s[n - 1])).recip().map_err(|_| SaitoError::DeterminantNotOne("a - c t~^n = 0".into()))?;
    let s_middle: RationalExpr = (1..n - 1).map(|i| s[i].mul(&s[n - 1 - i])).sum();
    let mut inverse = Vec::with_capacity(n);
    inverse.push(s[0].sub(&c.mul(&fac).mul(&s_middle).scale(&Rational::new(1, 2))));
    for si in &s[1..n - 1] {
        inverse.push(si.mul(&fac));
    }
    inverse.push(d.mul(&s[n - 1]).sub(b).mul(&fac));

    let mut map = FlatCoordinates { source: source.clone(), target: target.clone(), params, forward, inverse, report: Report::new("flat coordinates of the rescaled metric") };
    let mut report = Report::new("flat coordinates of the rescaled metric");
    let fwd = map.forward_map();
    let inv = map.inverse_map();
    report.check("inverse-after-forward", "the inverse map undoes the forward map", || {
        all_zero(map.inverse.iter().enumerate().map(|(i, e)| {
            let back = e.substitute(&fwd).expect("forward map is regular");
            (format!("t{}", i + 1), back.sub(&t[i]))
        }))
    });
    report.check("forward-after-inverse", "the forward map undoes the inverse map", || {
        all_zero(map.forward.iter().enumerate().map(|(i, e)| {
            let back = e.substitute(&inv).expect("inverse map is regular");
            (format!("t~{}", i + 1), back.sub(&s[i]))
        }))
    });
    report.check("pullback", "h~ = sum dt~^i dt~^(n+1-i)", || {
        let jac = Matrix::from_fn(n, n, |i, j| map.forward[i].diff(source.coord(j)));
        let flat = Matrix::antidiagonal(n);
        let pulled = jac.transpose().mul(&flat).mul(&jac);
        let omega2 = den.square().recip().expect("nonzero");
        all_zero((0..n * n).map(|x| {
            let (i, j) = (x / n, x % n);
            (format!("h~[{}][{}]", i + 1, j + 1), pulled.get(i, j).sub(&flat.get(i, j).mul(&omega2)))
        }))
    });
    map.report = report;
    Ok(map)
}

/// [`flat_coordinate_map`] on the charts `t1..tn -> tt1..ttn`.
pub fn modified_flat_coordinates(
    n: usize,
    a: &RationalExpr,
    b: &RationalExpr,
    c: &RationalExpr,
    d: &RationalExpr,
) -> Result<FlatCoordinates, SaitoError> {
    flat_coordinate_map(&Chart::numbered("t", "t", n), &Chart::numbered("tt", "tt", n), a, b, c, d)
}
