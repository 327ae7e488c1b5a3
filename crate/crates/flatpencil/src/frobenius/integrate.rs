use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::FrobeniusError;
use crate::expr::{Atom, Poly, Rational, RationalExpr};
use crate::tensor::Chart;

fn unsupported(msg: impl Into<String>) -> FrobeniusError {
    FrobeniusError::IntegrationUnsupported(msg.into())
}

fn coeffs(p: &Poly, x: &str) -> Vec<RationalExpr> {
    match p.var_index(&Atom::var(x)) {
        Some(k) => p.to_univariate(k).into_iter().map(RationalExpr::from_poly).collect(),
        None => vec![RationalExpr::from_poly(p.clone())],
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Coefficients of `p(u + r)` in `u`.
fn shift(p: &[RationalExpr], r: &RationalExpr) -> Vec<RationalExpr> {
    let mut out = vec![RationalExpr::zero(); p.len()];
    let mut rp = vec![RationalExpr::one()];
    for i in 1..p.len() {
        rp.push(rp[i - 1].mul(r));
    }
    for (i, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (l, o) in out.iter_mut().enumerate().take(i + 1) {
            *o = o.add(&c.mul(&rp[i - l]).mul(&RationalExpr::int(binomial(i, l))));
        }
    }
    out
}

fn eval(p: &[RationalExpr], r: &RationalExpr) -> RationalExpr {
    p.iter().rev().fold(RationalExpr::zero(), |acc, c| acc.mul(r).add(c))
}

/// Divides by `x - r`, assuming `r` is a root.
fn deflate(p: &[RationalExpr], r: &RationalExpr) -> Vec<RationalExpr> {
    let m = p.len() - 1;
    let mut q = vec![RationalExpr::zero(); m];
    let mut carry = RationalExpr::zero();
    for i in (1..=m).rev() {
        carry = p[i].add(&carry.mul(r));
        q[i - 1] = carry.clone();
    }
    q
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    for d in 1..=n.sqrt() {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
    }
    Some(out)
}

/// Roots with multiplicities of a polynomial in `x` that splits into linear
/// factors: either a single repeated root with coefficients in the other
/// variables, or rational roots of a numeric polynomial.
fn linear_roots(d: &[RationalExpr]) -> Result<Vec<(RationalExpr, usize)>, FrobeniusError> {
    let k = d.len() - 1;
    let lead = &d[k];
    let r = d[k - 1].neg().div(&lead.mul(&RationalExpr::int(k as i64)));
    let mr = r.neg();
    let single = (0..=k).all(|i| {
        let mut expect = lead.mul(&RationalExpr::int(binomial(k, i)));
        for _ in 0..k - i {
            expect = expect.mul(&mr);
        }
        d[i].sub(&expect).is_zero()
    });
    if single {
        return Ok(vec![(r, k)]);
    }
    let consts: Option<Vec<Rational>> = d.iter().map(|c| c.constant_value()).collect();
    let Some(consts) = consts else {
        return Err(unsupported("denominator is not a power of a single linear factor"));
    };
    let lcm = consts.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = consts.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let mut roots: Vec<(RationalExpr, usize)> = Vec::new();
    let mut p: Vec<RationalExpr> = d.to_vec();
    let zeros = ints.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        roots.push((RationalExpr::zero(), zeros));
        p.drain(..zeros);
    }
    let (Some(num), Some(den)) = (divisors(&ints[zeros]), divisors(&ints[k])) else {
        return Err(unsupported("coefficients too large for rational root search"));
    };
    'search: for a in &num {
        for b in &den {
            for sign in [1, -1] {
                if p.len() == 1 {
                    break 'search;
                }
                let cand = RationalExpr::constant(Rational::new(a * sign, b.clone()));
                if roots.iter().any(|(r, _)| *r == cand) {
                    continue;
                }
                let mut mult = 0;
                while p.len() > 1 && eval(&p, &cand).is_zero() {
                    p = deflate(&p, &cand);
                    mult += 1;
                }
                if mult > 0 {
                    roots.push((cand, mult));
                }
            }
        }
    }
    if p.len() > 1 {
        return Err(unsupported("denominator does not split into rational linear factors"));
    }
    Ok(roots)
}

/// Laurent coefficients `b_j` of `(x - r)^(j - k)`, `j < k`, at each root `r`
/// of multiplicity `k` of the denominator, viewed as a polynomial in `x`.
fn principal_parts(e: &RationalExpr, x: &str) -> Result<Vec<(RationalExpr, Vec<RationalExpr>)>, FrobeniusError> {
    let d = coeffs(e.denom(), x);
    if d.len() == 1 {
        return Ok(Vec::new());
    }
    let n = coeffs(e.numer(), x);
    let mut out = Vec::new();
    for (r, k) in linear_roots(&d)? {
        let pu = shift(&n, &r);
        let qu = shift(&d, &r);
        if qu.iter().take(k).any(|c| !c.is_zero()) {
            return Err(unsupported("root multiplicity mismatch"));
        }
        let q = &qu[k..];
        let mut b: Vec<RationalExpr> = Vec::with_capacity(k);
        for j in 0..k {
            let mut v = pu.get(j).cloned().unwrap_or_else(RationalExpr::zero);
            for l in 1..=j {
                if let Some(ql) = q.get(l) {
                    v = v.sub(&ql.mul(&b[j - l]));
                }
            }
            b.push(v.div(&q[0]));
        }
        out.push((r, b));
    }
    Ok(out)
}

fn principal_sum(x: &str, parts: &[(RationalExpr, Vec<RationalExpr>)]) -> Result<RationalExpr, FrobeniusError> {
    let xe = RationalExpr::var(x);
    let mut acc = RationalExpr::zero();
    for (r, b) in parts {
        let xr = xe.sub(r);
        let k = b.len() as i32;
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                acc = acc.add(&bj.mul(&xr.pow(j as i32 - k)?));
            }
        }
    }
    Ok(acc)
}

/// An antiderivative in `x` of a rational function whose denominator splits
/// into linear factors in `x`. Logarithmic terms are not supported.
pub(crate) fn antiderivative(e: &RationalExpr, x: &str) -> Result<RationalExpr, FrobeniusError> {
    if !e.depends_on(x) {
        return Ok(e.mul(&RationalExpr::var(x)));
    }
    if e.atoms().iter().any(|a| a.as_func().is_some() && a.depends_on(x)) {
        return Err(unsupported(format!("integrand has a function of {x}")));
    }
    let xe = RationalExpr::var(x);
    let parts = principal_parts(e, x)?;
    let mut integral = RationalExpr::zero();
    for (r, b) in &parts {
        let k = b.len() as i32;
        if !b[b.len() - 1].is_zero() {
            return Err(unsupported(format!("logarithmic term at {x} = {r}")));
        }
        let xr = xe.sub(r);
        for (j, bj) in b.iter().enumerate() {
            let p = j as i32 - k + 1;
            if !bj.is_zero() && p != 0 {
                integral = integral.add(&bj.mul(&xr.pow(p)?).div(&RationalExpr::int(p as i64)));
            }
        }
    }
    let rest = e.sub(&principal_sum(x, &parts)?);
    if rest.denom().var_index(&Atom::var(x)).is_some() {
        return Err(unsupported("partial fraction remainder is not polynomial"));
    }
    let den = RationalExpr::from_poly(rest.denom().clone());
    for (i, c) in coeffs(rest.numer(), x).iter().enumerate() {
        if !c.is_zero() {
            integral = integral.add(&c.mul(&xe.pow(i as i32 + 1)?).div(&den.mul(&RationalExpr::int(i as i64 + 1))));
        }
    }
    Ok(integral)
}

/// Removes the terms of total degree at most two in the chart coordinates
/// from the polynomial part of `e`. Applies when the denominator involves at
/// most one coordinate; otherwise `e` is returned unchanged.
pub(crate) fn drop_quadratic(chart: &Chart, e: &RationalExpr) -> Result<RationalExpr, FrobeniusError> {
    let in_den: Vec<&String> = chart.coords().iter().filter(|c| e.denom().var_index(&Atom::var(c)).is_some()).collect();
    let (principal, poly) = match in_den.as_slice() {
        [] => (RationalExpr::zero(), e.clone()),
        [x] => {
            let Ok(parts) = principal_parts(e, x) else { return Ok(e.clone()) };
            let p = principal_sum(x, &parts)?;
            (p.clone(), e.sub(&p))
        }
        _ => return Ok(e.clone()),
    };
    if chart.coords().iter().any(|c| poly.denom().var_index(&Atom::var(c)).is_some()) {
        return Ok(e.clone());
    }
    let num = poly.numer();
    let coord_slots: Vec<usize> = num.vars().iter().enumerate().filter(|(_, a)| a.as_var().is_some_and(|v| chart.index_of(v).is_some())).map(|(i, _)| i).collect();
    let kept = num.terms().iter().filter(|(ex, _)| coord_slots.iter().map(|&i| ex[i]).sum::<u32>() > 2).cloned();
    let num = Poly::from_terms(num.vars().to_vec(), kept);
    Ok(RationalExpr::from_poly(num).div(&RationalExpr::from_poly(poly.denom().clone())).add(&principal))
}

/// A potential of the closed 1-form `sum w_i dx^i`, built one variable at a
/// time.
fn potential(chart: &Chart, w: &[RationalExpr]) -> Result<RationalExpr, FrobeniusError> {
    let mut phi = RationalExpr::zero();
    for (i, x) in chart.coords().iter().enumerate() {
        let rest = w[i].sub(&phi.diff(x));
        if rest.is_zero() {
            continue;
        }
        if let Some(prev) = chart.coords()[..i].iter().find(|y| rest.depends_on(y)) {
            return Err(unsupported(format!("the form is not closed: residual depends on {prev}")));
        }
        phi = phi.add(&antiderivative(&rest, x)?);
    }
    Ok(phi)
}

/// A function `F` with `d^3 F / dx^a dx^b dx^c = c[(a n + b) n + c]`, for a
/// symmetric, integrable array of third derivatives whose denominators split
/// into linear factors. Polynomial terms of degree at most two are dropped.
pub fn integrate_third_derivatives(chart: &Chart, c: &[RationalExpr]) -> Result<RationalExpr, FrobeniusError> {
    let n = chart.dim();
    if c.len() != n * n * n {
        return Err(unsupported(format!("expected {} third derivatives, got {}", n * n * n, c.len())));
    }
    let mut second = vec![RationalExpr::zero(); n * n];
    for a in 0..n {
        for b in a..n {
            let v = potential(chart, &c[(a * n + b) * n..(a * n + b + 1) * n])?;
            second[a * n + b] = v.clone();
            second[b * n + a] = v;
        }
    }
    let first: Vec<RationalExpr> = (0..n).map(|a| potential(chart, &second[a * n..(a + 1) * n])).collect::<Result<_, _>>()?;
    drop_quadratic(chart, &potential(chart, &first)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Symbols;

    fn parse(s: &str) -> RationalExpr {
        Symbols::open().parse(s).unwrap()
    }

    #[test]
    fn single_linear_factor() {
        let e = parse("(x^2 + y)/(2*x - y)^4");
        assert_eq!(antiderivative(&e, "x").unwrap().diff("x"), e);
        assert!(matches!(antiderivative(&parse("x/(x - y)^2"), "x"), Err(FrobeniusError::IntegrationUnsupported(_))));
    }

    #[test]
    fn two_numeric_factors() {
        let e = parse("(x^3 + y)/((x - 1)*(2*x + 3)^2)").diff("x");
        assert_eq!(antiderivative(&e, "x").unwrap().diff("x"), e);
    }

    #[test]
    fn recovers_quintic() {
        let chart = Chart::numbered("t", "t", 3);
        let f = parse("t1^2*t3/2 + t1*t2^2/2 + t2^4/(8*(t3+1)) + (t3+1)^2*t2^3");
        let n = 3;
        let mut c = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    c.push(f.diff(chart.coord(a)).diff(chart.coord(b)).diff(chart.coord(k)));
                }
            }
        }
        let g = integrate_third_derivatives(&chart, &c).unwrap();
        let h = g.sub(&f);
        for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    assert!(h.diff(chart.coord(a)).diff(chart.coord(b)).diff(chart.coord(k)).is_zero());
                }
            }
        }
    }
}
