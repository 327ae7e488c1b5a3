use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::JetError;
use crate::expr::Rational;

/// A second-order jet: value, gradient and symmetric Hessian of a function
/// at a point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Jet2 {
    pub value: Rational,
    pub gradient: Vec<Rational>,
    pub hessian: Vec<Vec<Rational>>,
}

impl Jet2 {
    pub fn constant(n: usize, c: Rational) -> Jet2 {
        Jet2 { value: c, gradient: vec![Rational::zero(); n], hessian: vec![vec![Rational::zero(); n]; n] }
    }

    pub fn zero(n: usize) -> Jet2 {
        Jet2::constant(n, Rational::zero())
    }

    pub fn one(n: usize) -> Jet2 {
        Jet2::constant(n, Rational::one())
    }

    /// The coordinate function `x^i` at a point where it takes `value`.
    pub fn variable(n: usize, i: usize, value: Rational) -> Jet2 {
        let mut j = Jet2::constant(n, value);
        j.gradient[i] = Rational::one();
        j
    }

    pub fn dim(&self) -> usize {
        self.gradient.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| self.hessian[i][j] == self.hessian[j][i]))
    }

    pub fn scale(&self, s: &Rational) -> Jet2 {
        Jet2 {
            value: &self.value * s,
            gradient: self.gradient.iter().map(|g| g * s).collect(),
            hessian: self.hessian.iter().map(|row| row.iter().map(|h| h * s).collect()).collect(),
        }
    }

    /// `phi(f)` for a univariate `phi` with `phi(f0) = d0`, `phi'(f0) = d1`
    /// and `phi''(f0) = d2`.
    pub fn compose(&self, d0: &Rational, d1: &Rational, d2: &Rational) -> Jet2 {
        let n = self.dim();
        let gradient = self.gradient.iter().map(|g| g * d1).collect();
        let hessian = (0..n)
            .map(|i| (0..n).map(|j| &(&(&self.gradient[i] * &self.gradient[j]) * d2) + &(&self.hessian[i][j] * d1)).collect())
            .collect();
        Jet2 { value: d0.clone(), gradient, hessian }
    }

    pub fn recip(&self) -> Result<Jet2, JetError> {
        if self.value.is_zero() {
            return Err(JetError::PoleAtPoint("reciprocal of a jet with zero value".into()));
        }
        let v = self.value.recip();
        let v2 = &v * &v;
        let v3 = &v2 * &v;
        Ok(self.compose(&v, &-&v2, &(&v3 * &Rational::from(2))))
    }

    pub fn div(&self, other: &Jet2) -> Result<Jet2, JetError> {
        Ok(self * &other.recip()?)
    }

    pub fn pow(&self, e: i32) -> Result<Jet2, JetError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = Jet2::one(self.dim());
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }
}

impl<'a, 'b> Add<&'b Jet2> for &'a Jet2 {
    type Output = Jet2;
    fn add(self, o: &'b Jet2) -> Jet2 {
        Jet2 {
            value: &self.value + &o.value,
            gradient: self.gradient.iter().zip(&o.gradient).map(|(a, b)| a + b).collect(),
            hessian: self.hessian.iter().zip(&o.hessian).map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect()).collect(),
        }
    }
}

impl<'a, 'b> Sub<&'b Jet2> for &'a Jet2 {
    type Output = Jet2;
    fn sub(self, o: &'b Jet2) -> Jet2 {
        self + &-o
    }
}

impl<'a> Neg for &'a Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(&Rational::from(-1))
    }
}

impl<'a, 'b> Mul<&'b Jet2> for &'a Jet2 {
    type Output = Jet2;
    fn mul(self, o: &'b Jet2) -> Jet2 {
        let n = self.dim();
        let (f, g) = (self, o);
        let gradient = (0..n).map(|i| &(&f.value * &g.gradient[i]) + &(&f.gradient[i] * &g.value)).collect();
        let hessian = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut h = &f.value * &g.hessian[i][j];
                        h += &g.value * &f.hessian[i][j];
                        h += &f.gradient[i] * &g.gradient[j];
                        h += &f.gradient[j] * &g.gradient[i];
                        h
                    })
                    .collect()
            })
            .collect();
        Jet2 { value: &f.value * &g.value, gradient, hessian }
    }
}

impl fmt::Display for Jet2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[Rational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let rows: Vec<String> = self.hessian.iter().map(|r| format!("[{}]", list(r))).collect();
        write!(f, "({}, [{}], [{}])", self.value, list(&self.gradient), rows.join(", "))
    }
}
