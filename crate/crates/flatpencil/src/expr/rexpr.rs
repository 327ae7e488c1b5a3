use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::gcd::gcd;
use super::{Atom, ExprError, Poly, Rational};

/// Quotient of polynomials kept in canonical form: numerator and denominator
/// coprime, denominator with leading coefficient one, zero written `0/1`.
///
/// Because the form is canonical, structural equality is equality of rational
/// functions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalExpr {
    num: Poly,
    den: Poly,
}

impl RationalExpr {
    pub fn new(num: Poly, den: Poly) -> Result<RationalExpr, ExprError> {
        if den.is_zero() {
            return Err(ExprError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RationalExpr::zero());
        }
        if let Some(c) = den.constant_value() {
            return Ok(RationalExpr::from_poly(num.scale(&c.recip())));
        }
        let g = gcd(&num, &den);
        if g.is_constant() {
            return Ok(RationalExpr::finish(num, den));
        }
        let num = num.div_exact(&g).expect("gcd divides numerator");
        let den = den.div_exact(&g).expect("gcd divides denominator");
        Ok(RationalExpr::finish(num, den))
    }

    /// Numerator and denominator already known to be coprime.
    fn finish(num: Poly, den: Poly) -> RationalExpr {
        if num.is_zero() {
            return RationalExpr::zero();
        }
        let lc = den.leading_coeff();
        if lc.is_one() {
            RationalExpr { num, den }
        } else {
            let inv = lc.recip();
            RationalExpr { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn from_poly(p: Poly) -> RationalExpr {
        RationalExpr { num: p, den: Poly::one() }
    }

    pub fn zero() -> RationalExpr {
        RationalExpr::from_poly(Poly::zero())
    }

    pub fn one() -> RationalExpr {
        RationalExpr::from_poly(Poly::one())
    }

    pub fn constant(c: Rational) -> RationalExpr {
        RationalExpr::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> RationalExpr {
        RationalExpr::constant(Rational::from(n))
    }

    pub fn frac(n: i64, d: i64) -> RationalExpr {
        RationalExpr::constant(Rational::new(n, d))
    }

    pub fn var(name: &str) -> RationalExpr {
        RationalExpr::from_poly(Poly::var(name))
    }

    pub fn atom(a: Atom) -> RationalExpr {
        RationalExpr::from_poly(Poly::atom(a))
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn add(&self, other: &RationalExpr) -> RationalExpr {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, c, d) = (&self.num, &self.den, &other.num, &other.den);
        if b.is_one() && d.is_one() {
            return RationalExpr::from_poly(a.add(c));
        }
        if d.is_one() {
            return RationalExpr::finish(a.add(&c.mul(b)), b.clone());
        }
        if b.is_one() {
            return RationalExpr::finish(a.mul(d).add(c), d.clone());
        }
        if b == d {
            let n = a.add(c);
            return RationalExpr::new(n, b.clone()).expect("nonzero denominator");
        }
        let g = gcd(b, d);
        if g.is_constant() {
            return RationalExpr::finish(a.mul(d).add(&c.mul(b)), b.mul(d));
        }
        let b1 = b.div_exact(&g).expect("gcd divides");
        let d1 = d.div_exact(&g).expect("gcd divides");
        let t = a.mul(&d1).add(&c.mul(&b1));
        if t.is_zero() {
            return RationalExpr::zero();
        }
        let g2 = gcd(&t, &g);
        if g2.is_constant() {
            RationalExpr::finish(t, b1.mul(&d1).mul(&g))
        } else {
            let t = t.div_exact(&g2).expect("gcd divides");
            let g = g.div_exact(&g2).expect("gcd divides");
            RationalExpr::finish(t, b1.mul(&d1).mul(&g))
        }
    }

    pub fn neg(&self) -> RationalExpr {
        RationalExpr { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RationalExpr) -> RationalExpr {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RationalExpr) -> RationalExpr {
        if self.is_zero() || other.is_zero() {
            return RationalExpr::zero();
        }
        let (a, b, c, d) = (&self.num, &self.den, &other.num, &other.den);
        if b.is_one() && d.is_one() {
            return RationalExpr::from_poly(a.mul(c));
        }
        let (a, d) = cancel(a, d);
        let (c, b) = cancel(c, b);
        RationalExpr::finish(a.mul(&c), b.mul(&d))
    }

    pub fn scale(&self, s: &Rational) -> RationalExpr {
        if s.is_zero() {
            return RationalExpr::zero();
        }
        RationalExpr { num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn recip(&self) -> Result<RationalExpr, ExprError> {
        if self.is_zero() {
            return Err(ExprError::ZeroDenominator);
        }
        Ok(RationalExpr::finish(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &RationalExpr) -> Result<RationalExpr, ExprError> {
        Ok(self.mul(&other.recip()?))
    }

    /// Division by an expression known to be nonzero.
    pub fn div(&self, other: &RationalExpr) -> RationalExpr {
        self.checked_div(other).expect("division by an identically zero expression")
    }

    pub fn pow(&self, e: i32) -> Result<RationalExpr, ExprError> {
        if e < 0 {
            return self.recip()?.pow(-e);
        }
        let e = e as u32;
        Ok(RationalExpr { num: self.num.pow(e), den: self.den.pow(e) })
    }

    pub fn square(&self) -> RationalExpr {
        self.mul(self)
    }

    /// Partial derivative with respect to a variable. Opaque function atoms
    /// are differentiated through their arguments by the chain rule.
    pub fn diff(&self, var: &str) -> RationalExpr {
        if self.den.is_one() {
            return poly_diff(&self.num, var);
        }
        let da = poly_diff(&self.num, var);
        let db = poly_diff(&self.den, var);
        if db.is_zero() {
            return da.mul(&RationalExpr::finish(Poly::one(), self.den.clone()));
        }
        if da.is_polynomial() && db.is_polynomial() {
            let (a, b) = (&self.num, &self.den);
            let (a1, b1) = (&da.num, &db.num);
            let s = gcd(b, b1);
            let bq = b.div_exact(&s).expect("gcd divides");
            let bdq = b1.div_exact(&s).expect("gcd divides");
            let num = a1.mul(&bq).sub(&a.mul(&bdq));
            if num.is_zero() {
                return RationalExpr::zero();
            }
            let den_rest = bq.mul(&bq);
            if s.is_constant() {
                return RationalExpr::finish(num.scale(&s.constant_value().unwrap().recip()), den_rest);
            }
            let g = gcd(&num, &s);
            let num = num.div_exact(&g).expect("gcd divides");
            let s = s.div_exact(&g).expect("gcd divides");
            return RationalExpr::finish(num, s.mul(&den_rest));
        }
        let b = RationalExpr::from_poly(self.den.clone());
        let a = RationalExpr::from_poly(self.num.clone());
        da.mul(&b).sub(&a.mul(&db)).div(&b.square())
    }

    /// Top-level atoms of numerator and denominator.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.num.vars().iter().chain(self.den.vars().iter()).cloned().collect()
    }

    pub fn collect_free_vars(&self, out: &mut BTreeSet<Arc<str>>) {
        for a in self.num.vars().iter().chain(self.den.vars().iter()) {
            a.free_vars(out);
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut out);
        out
    }

    pub fn depends_on(&self, var: &str) -> bool {
        self.num.vars().iter().chain(self.den.vars().iter()).any(|a| a.depends_on(var))
    }

    /// True when no atom depends on any of `vars`.
    pub fn is_free_of<S: AsRef<str>>(&self, vars: &[S]) -> bool {
        vars.iter().all(|v| !self.depends_on(v.as_ref()))
    }

    pub fn has_function_atoms(&self) -> bool {
        self.atoms().iter().any(|a| a.as_func().is_some())
    }

    /// Replaces atoms by expressions, simultaneously.
    pub fn substitute_atoms(&self, map: &BTreeMap<Atom, RationalExpr>) -> Result<RationalExpr, ExprError> {
        let n = compose(&self.num, |a| map.get(a).cloned())?;
        let d = compose(&self.den, |a| map.get(a).cloned())?;
        n.checked_div(&d)
    }

    /// Simultaneous substitution of variables, also inside function
    /// arguments.
    pub fn substitute(&self, bindings: &BTreeMap<String, RationalExpr>) -> Result<RationalExpr, ExprError> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let mut map = BTreeMap::new();
        for a in self.atoms() {
            if let Some(v) = substitute_atom(&a, bindings)? {
                map.insert(a, v);
            }
        }
        self.substitute_atoms(&map)
    }

    /// Evaluates with every variable bound to a rational; `None` when a
    /// variable or function atom is unbound, error when the denominator
    /// vanishes.
    pub fn eval(&self, values: &BTreeMap<String, Rational>) -> Option<Result<Rational, ExprError>> {
        let look = |a: &Atom| match a {
            Atom::Var(v) => values.get(&**v).cloned(),
            Atom::Func(_) => None,
        };
        let n = self.num.eval(look)?;
        let d = self.den.eval(look)?;
        if d.is_zero() {
            return Some(Err(ExprError::ZeroDenominator));
        }
        Some(Ok(n / d))
    }

    pub fn from_rational(c: &Rational) -> RationalExpr {
        RationalExpr::constant(c.clone())
    }
}

fn substitute_atom(a: &Atom, bindings: &BTreeMap<String, RationalExpr>) -> Result<Option<RationalExpr>, ExprError> {
    match a {
        Atom::Var(v) => Ok(bindings.get(&**v).cloned()),
        Atom::Func(fa) => {
            if !fa.args.iter().any(|arg| bindings.keys().any(|k| arg.depends_on(k))) {
                return Ok(None);
            }
            let args = fa.args.iter().map(|arg| arg.substitute(bindings)).collect::<Result<Vec<_>, _>>()?;
            Ok(Some(RationalExpr::atom(fa.with_args(args))))
        }
    }
}

/// Removes the gcd of `a` and `b` from both.
fn cancel(a: &Poly, b: &Poly) -> (Poly, Poly) {
    if b.is_one() || a.is_constant() || b.is_constant() {
        return (a.clone(), b.clone());
    }
    let g = gcd(a, b);
    if g.is_constant() {
        (a.clone(), b.clone())
    } else {
        (a.div_exact(&g).expect("gcd divides"), b.div_exact(&g).expect("gcd divides"))
    }
}

/// Evaluates `p` with some atoms replaced by expressions, clearing
/// denominators once instead of term by term.
pub(crate) fn compose(p: &Poly, value: impl Fn(&Atom) -> Option<RationalExpr>) -> Result<RationalExpr, ExprError> {
    let vals: Vec<Option<RationalExpr>> = p.vars().iter().map(&value).collect();
    if vals.iter().all(|v| v.is_none()) {
        return Ok(RationalExpr::from_poly(p.clone()));
    }
    let n = p.vars().len();
    let maxdeg: Vec<u32> = (0..n).map(|k| p.degree_in(k)).collect();
    let nums: Vec<Poly> = (0..n)
        .map(|k| match &vals[k] {
            Some(v) => v.num.clone(),
            None => Poly::atom(p.vars()[k].clone()),
        })
        .collect();
    let dens: Vec<Option<Poly>> = (0..n)
        .map(|k| match &vals[k] {
            Some(v) if !v.den.is_one() => Some(v.den.clone()),
            _ => None,
        })
        .collect();
    let mut num_pows: Vec<Vec<Poly>> = nums.iter().map(|x| vec![Poly::one(), x.clone()]).collect();
    let mut den_pows: Vec<Vec<Poly>> =
        dens.iter().map(|x| x.as_ref().map(|d| vec![Poly::one(), d.clone()]).unwrap_or_default()).collect();
    fn power(cache: &mut Vec<Poly>, e: usize) -> Poly {
        while cache.len() <= e {
            let next = cache.last().unwrap().mul(&cache[1]);
            cache.push(next);
        }
        cache[e].clone()
    }
    let mut acc = Poly::zero();
    for (e, c) in p.terms() {
        let mut t = Poly::constant(c.clone());
        for k in 0..n {
            if e[k] > 0 {
                t = t.mul(&power(&mut num_pows[k], e[k] as usize));
            }
            if dens[k].is_some() && maxdeg[k] > e[k] {
                t = t.mul(&power(&mut den_pows[k], (maxdeg[k] - e[k]) as usize));
            }
        }
        acc = acc.add(&t);
    }
    let mut den = Poly::one();
    for k in 0..n {
        if dens[k].is_some() {
            den = den.mul(&power(&mut den_pows[k], maxdeg[k] as usize));
        }
    }
    if den.is_one() {
        Ok(RationalExpr::from_poly(acc))
    } else {
        RationalExpr::new(acc, den)
    }
}

/// Derivative of a polynomial in atoms with respect to a variable.
fn poly_diff(p: &Poly, var: &str) -> RationalExpr {
    let mut acc = Poly::zero();
    let mut extra: Option<RationalExpr> = None;
    for (k, atom) in p.vars().iter().enumerate() {
        match atom {
            Atom::Var(v) => {
                if &**v == var {
                    acc = acc.add(&p.diff_index(k));
                }
            }
            Atom::Func(fa) => {
                if !atom.depends_on(var) {
                    continue;
                }
                let dp = p.diff_index(k);
                for (j, arg) in fa.args.iter().enumerate() {
                    let da = arg.diff(var);
                    if da.is_zero() {
                        continue;
                    }
                    let mut idx = fa.index.clone();
                    idx[j] += 1;
                    let term = dp.mul(&Poly::atom(fa.with_index(idx)));
                    if da.is_polynomial() {
                        acc = acc.add(&term.mul(&da.num));
                    } else {
                        let t = RationalExpr::from_poly(term).mul(&da);
                        extra = Some(match extra {
                            Some(e) => e.add(&t),
                            None => t,
                        });
                    }
                }
            }
        }
    }
    let base = RationalExpr::from_poly(acc);
    match extra {
        Some(e) => base.add(&e),
        None => base,
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print(self))
    }
}

impl fmt::Debug for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print(self))
    }
}

impl From<Poly> for RationalExpr {
    fn from(p: Poly) -> Self {
        RationalExpr::from_poly(p)
    }
}

impl From<i64> for RationalExpr {
    fn from(n: i64) -> Self {
        RationalExpr::int(n)
    }
}

impl From<Rational> for RationalExpr {
    fn from(c: Rational) -> Self {
        RationalExpr::constant(c)
    }
}

impl<'a, 'b> Add<&'b RationalExpr> for &'a RationalExpr {
    type Output = RationalExpr;
    fn add(self, rhs: &'b RationalExpr) -> RationalExpr {
        RationalExpr::add(self, rhs)
    }
}

impl<'a, 'b> Sub<&'b RationalExpr> for &'a RationalExpr {
    type Output = RationalExpr;
    fn sub(self, rhs: &'b RationalExpr) -> RationalExpr {
        RationalExpr::sub(self, rhs)
    }
}

impl<'a, 'b> Mul<&'b RationalExpr> for &'a RationalExpr {
    type Output = RationalExpr;
    fn mul(self, rhs: &'b RationalExpr) -> RationalExpr {
        RationalExpr::mul(self, rhs)
    }
}

impl<'a> Neg for &'a RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        RationalExpr::neg(self)
    }
}

impl std::iter::Sum for RationalExpr {
    fn sum<I: Iterator<Item = RationalExpr>>(iter: I) -> Self {
        iter.fold(RationalExpr::zero(), |a, b| a.add(&b))
    }
}
