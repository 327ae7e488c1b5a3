use std::collections::BTreeMap;

use super::{CoxeterDatum, SaitoError};
use crate::expr::{Atom, Poly, Rational, RationalExpr};
use crate::report::{all_zero, Outcome};
use crate::tensor::{Chart, Matrix, MetricField};

type Key = Vec<(Atom, u32)>;

fn coefficients(p: &Poly) -> BTreeMap<Key, Rational> {
    p.terms()
        .iter()
        .map(|(e, c)| {
            let key = p.vars().iter().zip(e.iter()).filter(|(_, &k)| k > 0).map(|(a, &k)| (a.clone(), k)).collect();
            (key, c.clone())
        })
        .collect()
}

/// Exponent vectors `e` with `sum e_k w_k = total`.
fn weighted_monomials(weights: &[u32], total: u32) -> Vec<Vec<u32>> {
    fn go(weights: &[u32], total: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let Some((&w, rest)) = weights.split_first() else {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        };
        for k in 0..=total / w {
            prefix.push(k);
            go(rest, total - k * w, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(weights, total, &mut Vec::new(), &mut out);
    out
}

/// Solves `A x = b` exactly; `None` if inconsistent or not unique.
fn solve(mut rows: Vec<Vec<Rational>>, unknowns: usize) -> Option<Vec<Rational>> {
    let mut r = 0;
    for col in 0..unknowns {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            return None;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let pivot = rows[r].clone();
                for (v, pv) in rows[i].iter_mut().zip(&pivot) {
                    *v = &*v - &(&f * pv);
                }
            }
        }
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[unknowns].is_zero()) {
        return None;
    }
    Some((0..unknowns).map(|k| rows[k][unknowns].clone()).collect())
}

/// Writes a polynomial in `x`, weighted-homogeneous of degree `total`, as a
/// polynomial in the invariants.
pub(crate) fn express_in_invariants(cd: &CoxeterDatum, chart: &Chart, p: &Poly, total: u32) -> Result<RationalExpr, SaitoError> {
    if p.is_zero() {
        return Ok(RationalExpr::zero());
    }
    let monos = weighted_monomials(&cd.degrees, total);
    let images: Vec<BTreeMap<Key, Rational>> = monos
        .iter()
        .map(|e| {
            let m = e.iter().zip(&cd.invariants).fold(Poly::one(), |acc, (&k, t)| acc.mul(&t.numer().pow(k)));
            coefficients(&m)
        })
        .collect();
    let target = coefficients(p);
    let mut keys: Vec<&Key> = target.keys().collect();
    for im in &images {
        keys.extend(im.keys());
    }
    keys.sort();
    keys.dedup();
    let zero = Rational::zero();
    let rows: Vec<Vec<Rational>> = keys
        .iter()
        .map(|k| {
            let mut row: Vec<Rational> = images.iter().map(|im| im.get(*k).unwrap_or(&zero).clone()).collect();
            row.push(target.get(*k).unwrap_or(&zero).clone());
            row
        })
        .collect();
    let sol = solve(rows, monos.len()).ok_or_else(|| SaitoError::RewriteFailed(format!("{p} is not a polynomial in the invariants of {}", cd.name)))?;
    let t = chart.coord_exprs();
    Ok(monos
        .iter()
        .zip(sol)
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| {
            let m = e.iter().zip(&t).fold(RationalExpr::one(), |acc, (&k, ti)| acc.mul(&ti.pow(k as i32).expect("nonnegative power")));
            m.scale(&c)
        })
        .sum())
}

/// `g^ij(x) = sum_k dt^i/dx^k dt^j/dx^k`.
pub fn pushforward_in_x(cd: &CoxeterDatum) -> Matrix {
    let n = cd.rank();
    let grads: Vec<Vec<RationalExpr>> = cd.invariants.iter().map(|t| cd.coords.iter().map(|x| t.diff(x)).collect()).collect();
    Matrix::from_fn(n, n, |i, j| grads[i].iter().zip(&grads[j]).map(|(a, b)| a.mul(b)).sum())
}

/// The chart `t1, ..., tn` of the invariants.
pub fn invariant_chart(cd: &CoxeterDatum) -> Chart {
    Chart::numbered("t", "t", cd.rank())
}

/// The contravariant pushforward of `sum (dx^i)^2`, written in the
/// invariants `t^i`.
pub fn pushforward_metric(cd: &CoxeterDatum) -> Result<MetricField, SaitoError> {
    let chart = invariant_chart(cd);
    let gx = pushforward_in_x(cd);
    let n = cd.rank();
    let mut g = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = express_in_invariants(cd, &chart, gx.get(i, j).numer(), cd.degrees[i] + cd.degrees[j] - 2)?;
            g.set(i, j, v.clone());
            g.set(j, i, v);
        }
    }
    Ok(MetricField::contravariant(&chart, g)?)
}

/// Substitutes `t = t(x)` into a matrix on the invariant chart.
pub fn in_x(cd: &CoxeterDatum, m: &Matrix) -> Result<Matrix, SaitoError> {
    let chart = invariant_chart(cd);
    let map: BTreeMap<String, RationalExpr> = chart.coords().iter().cloned().zip(cd.invariants.iter().cloned()).collect();
    Ok(m.substitute(&map)?)
}

/// The rewritten metric reproduces the pushforward after `t = t(x)`.
pub fn round_trip(cd: &CoxeterDatum, g: &MetricField) -> Outcome {
    let back = in_x(cd, g.upper()).map_err(|e| e.to_string())?;
    let gx = pushforward_in_x(cd);
    let n = cd.rank();
    all_zero((0..n * n).map(|x| (format!("g^{}{}", x / n + 1, x % n + 1), back.entries()[x].sub(&gx.entries()[x]))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighted_monomials_counts() {
        assert_eq!(weighted_monomials(&[4, 3, 2], 6), vec![vec![0, 0, 3], vec![0, 2, 0], vec![1, 0, 1]]);
        assert!(weighted_monomials(&[4, 2], 3).is_empty());
    }

    #[test]
    fn solve_detects_inconsistency() {
        let r = |v: &[i64]| v.iter().map(|&x| Rational::from(x)).collect::<Vec<_>>();
        assert_eq!(solve(vec![r(&[1, 1, 3]), r(&[1, -1, 1])], 2), Some(r(&[2, 1])));
        assert_eq!(solve(vec![r(&[1, 2]), r(&[2, 5])], 1), None);
    }
}
