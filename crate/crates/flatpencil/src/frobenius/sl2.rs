use std::collections::BTreeMap;

use super::integrate::integrate_third_derivatives;
use super::{check_wdvv, FrobeniusError, Prepotential};
use crate::expr::RationalExpr;
use crate::report::{all_zero_mod, Report};
use crate::saito::{flat_coordinate_map, Unimodular};
use crate::tensor::{Chart, Matrix};

/// A solution of WDVV transformed by an element of SL(2).
#[derive(Debug, Clone)]
pub struct Sl2Transform {
    pub prepotential: Prepotential,
    /// `a, b, c, d` after imposing `ad - bc = 1`.
    pub params: Unimodular,
    /// `(c t^n + d)^2 f(t^2/(c t^n + d), ..., (a t^n + b)/(c t^n + d))`.
    pub function_part: RationalExpr,
    /// The closed form
    /// `F~ = cubic part + c/(8(c t^n + d)) (sum_{1<i<n} t^i t^(n+1-i))^2 + function part`.
    pub display: RationalExpr,
    pub report: Report,
}

fn cubic_part(t: &[RationalExpr]) -> (RationalExpr, RationalExpr) {
    let n = t.len();
    let middle: RationalExpr = (1..n - 1).map(|i| t[i].mul(&t[n - 1 - i])).sum();
    let half = RationalExpr::frac(1, 2);
    let cubic = half.mul(&t[0].square()).mul(&t[n - 1]).add(&half.mul(&t[0]).mul(&middle));
    (cubic, middle)
}

fn third_derivatives(chart: &Chart, f: &RationalExpr) -> Vec<RationalExpr> {
    let n = chart.dim();
    let mut out = vec![RationalExpr::zero(); n * n * n];
    for a in 0..n {
        let fa = f.diff(chart.coord(a));
        for b in a..n {
            let fab = fa.diff(chart.coord(b));
            for c in b..n {
                let v = fab.diff(chart.coord(c));
                for (x, y, z) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                    out[(x * n + y) * n + z] = v.clone();
                }
            }
        }
    }
    out
}

/// Applies `(a, b, c, d)` with `ad - bc = 1` to a prepotential
/// `F = t1^2 t^n/2 + t1 sum_{1<i<n} t^i t^(n+1-i)/2 + f(t^2, ..., t^n)`
/// whose metric is the unit anti-diagonal form. The new third derivatives
/// are `(c t~^n + d)^-2`-rescaled pullbacks of the old ones along the flat
/// coordinates of the rescaled metric; they are integrated and the result is
/// checked against WDVV and the closed form.
pub fn sl2_transform(p: &Prepotential, a: &RationalExpr, b: &RationalExpr, c: &RationalExpr, d: &RationalExpr) -> Result<Sl2Transform, FrobeniusError> {
    let n = p.dim();
    let chart = p.chart();
    if n < 2 || *p.eta().lower() != Matrix::antidiagonal(n) {
        return Err(FrobeniusError::NotAntiDiagonal);
    }
    p.eta_normalization()?;
    let internal = Chart::numbered("s", "_s", n);
    let flat = flat_coordinate_map(chart, &internal, d, &b.neg(), &c.neg(), a)?;
    let params = Unimodular {
        a: flat.params.d.clone(),
        b: flat.params.b.neg(),
        c: flat.params.c.neg(),
        d: flat.params.a.clone(),
        elimination: flat.params.elimination.clone(),
    };
    let inverse = flat.inverse_map();
    let s = internal.coord_exprs();
    let t = chart.coord_exprs();

    let (cubic, middle) = cubic_part(&t);
    let t1_zero = BTreeMap::from([(chart.coord(0).to_string(), RationalExpr::zero())]);
    let f = p.f().sub(&cubic).substitute(&t1_zero)?;

    // c s^n + d, written with the eliminated parameters
    let lin = flat.params.a.sub(&flat.params.c.mul(&s[n - 1]));
    let omega2 = lin.square();
    let jac = Matrix::from_fn(n, n, |i, a| flat.inverse[i].diff(internal.coord(a)));
    let pulled: Vec<RationalExpr> = (0..n * n * n).map(|x| p.third(x / (n * n), (x / n) % n, x % n).substitute(&inverse)).collect::<Result<_, _>>()?;
    let contract = |arr: &[RationalExpr]| -> Vec<RationalExpr> {
        // moves the last index to s, rotating it to the front
        let mut out = vec![RationalExpr::zero(); n * n * n];
        for x in 0..n * n {
            for c in 0..n {
                out[c * n * n + x] = (0..n).filter(|&k| !jac.get(k, c).is_zero()).map(|k| arr[x * n + k].mul(jac.get(k, c))).sum();
            }
        }
        out
    };
    let transformed: Vec<RationalExpr> = contract(&contract(&contract(&pulled))).iter().map(|e| p.reduce(&e.mul(&omega2))).collect();

    let mut report = Report::new("SL(2) action on a WDVV solution");
    report.absorb("flat-coordinates", flat.report.clone());
    report.check("poincare", "the new third derivatives are integrable", || {
        let mut items = Vec::new();
        for x in 0..n * n * n {
            let (i, j, k) = (x / (n * n), (x / n) % n, x % n);
            for m in 0..n {
                if m > i {
                    let e = transformed[x].diff(internal.coord(m)).sub(&transformed[(m * n + j) * n + k].diff(internal.coord(i)));
                    items.push((format!("d{} C{}{}{} - d{} C{}{}{}", m + 1, i + 1, j + 1, k + 1, i + 1, m + 1, j + 1, k + 1), e));
                }
            }
        }
        all_zero_mod(items, p.rules())
    });

    let args: BTreeMap<String, RationalExpr> = chart.coords()[1..].iter().map(|v| (v.clone(), inverse[v].clone())).collect();
    let function_part = omega2.mul(&f.substitute(&args)?);
    let fp3 = third_derivatives(&internal, &function_part);
    let residual: Vec<RationalExpr> = transformed.iter().zip(&fp3).map(|(x, y)| p.reduce(&x.sub(y))).collect();
    report.record(
        "function-part",
        "the new third derivatives minus those of the function part involve no unknown function",
        match residual.iter().find(|e| e.has_function_atoms()) {
            None => Ok(()),
            Some(e) => Err(e.to_string()),
        },
    );
    let rest = integrate_third_derivatives(&internal, &residual)?;
    let f_new = rest.add(&function_part);
    report.check("third-derivatives", "the integrated prepotential has the new third derivatives", || {
        let got = third_derivatives(&internal, &f_new);
        all_zero_mod((0..n * n * n).map(|x| (format!("F{}{}{}", x / (n * n) + 1, (x / n) % n + 1, x % n + 1), got[x].sub(&transformed[x]))), p.rules())
    });

    let rename: BTreeMap<String, RationalExpr> = internal.coords().iter().cloned().zip(t.iter().cloned()).collect();
    let f_out = f_new.substitute(&rename)?;
    let function_part = function_part.substitute(&rename)?;
    let prepotential = Prepotential::new(chart, f_out, Matrix::antidiagonal(n), None, p.rules().clone())?;
    let wdvv = check_wdvv(&prepotential)?;
    report.absorb("", wdvv);

    let den = c.mul(&t[n - 1]).add(d);
    let mut display_args: BTreeMap<String, RationalExpr> = chart.coords()[1..n - 1].iter().map(|v| (v.clone(), RationalExpr::var(v).div(&den))).collect();
    display_args.insert(chart.coord(n - 1).to_string(), a.mul(&t[n - 1]).add(b).div(&den));
    let display = cubic
        .add(&c.mul(&middle.square()).div(&den.mul(&RationalExpr::int(8))))
        .add(&den.square().mul(&f.substitute(&display_args)?));
    report.check("display", "the transformed prepotential equals the closed form", || {
        let diff = prepotential.reduce(&prepotential.f().sub(&params.eliminate(&display)));
        if diff.is_zero() {
            Ok(())
        } else {
            Err(format!("F~ - closed form = {diff}"))
        }
    });
    Ok(Sl2Transform { prepotential, params, function_part, display, report })
}
