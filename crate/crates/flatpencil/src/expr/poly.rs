use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::{Atom, Rational};

pub type Exps = SmallVec<[u32; 8]>;

/// Sparse multivariate polynomial with rational coefficients.
///
/// The variable list is sorted and contains exactly the atoms that occur, and
/// terms are sorted ascending in lex order of their exponent vectors, so the
/// derived comparisons are canonical.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    vars: Arc<[Atom]>,
    terms: Vec<(Exps, Rational)>,
}

fn empty_vars() -> Arc<[Atom]> {
    Arc::from(Vec::<Atom>::new())
}

/// Union of two sorted variable lists, with the position of each input
/// variable inside the union.
pub(crate) fn union_vars(a: &[Atom], b: &[Atom]) -> (Vec<Atom>, Vec<usize>, Vec<usize>) {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut ma, mut mb) = (Vec::with_capacity(a.len()), Vec::with_capacity(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take = if i == a.len() {
            2
        } else if j == b.len() {
            1
        } else {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => 1,
                std::cmp::Ordering::Greater => 2,
                std::cmp::Ordering::Equal => 3,
            }
        };
        let pos = out.len();
        match take {
            1 => {
                out.push(a[i].clone());
                ma.push(pos);
                i += 1;
            }
            2 => {
                out.push(b[j].clone());
                mb.push(pos);
                j += 1;
            }
            _ => {
                out.push(a[i].clone());
                ma.push(pos);
                mb.push(pos);
                i += 1;
                j += 1;
            }
        }
    }
    (out, ma, mb)
}

fn remap(e: &Exps, map: &[usize], len: usize) -> Exps {
    let mut out: Exps = SmallVec::from_elem(0, len);
    for (k, &p) in map.iter().enumerate() {
        out[p] = e[k];
    }
    out
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { vars: empty_vars(), terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { vars: empty_vars(), terms: vec![(SmallVec::new(), c)] }
        }
    }

    pub fn atom(a: Atom) -> Poly {
        Poly { vars: Arc::from(vec![a]), terms: vec![(SmallVec::from_elem(1, 1), Rational::one())] }
    }

    pub fn var(name: &str) -> Poly {
        Poly::atom(Atom::var(name))
    }

    /// Builds a polynomial from arbitrary (possibly unsorted, repeated or
    /// zero) terms over a sorted variable list.
    pub fn from_terms(vars: Vec<Atom>, terms: impl IntoIterator<Item = (Exps, Rational)>) -> Poly {
        debug_assert!(vars.windows(2).all(|w| w[0] < w[1]), "variables must be sorted");
        let mut map: HashMap<Exps, Rational> = HashMap::new();
        for (e, c) in terms {
            debug_assert_eq!(e.len(), vars.len());
            match map.get_mut(&e) {
                Some(v) => *v += c,
                None => {
                    map.insert(e, c);
                }
            }
        }
        Poly::from_map(vars, map)
    }

    fn from_map(vars: Vec<Atom>, map: HashMap<Exps, Rational>) -> Poly {
        let mut terms: Vec<(Exps, Rational)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Poly::from_sorted(vars, terms)
    }

    /// Prunes unused variables from sorted, nonzero, distinct terms.
    fn from_sorted(vars: Vec<Atom>, terms: Vec<(Exps, Rational)>) -> Poly {
        if terms.is_empty() {
            return Poly::zero();
        }
        let n = vars.len();
        let mut used = vec![false; n];
        for (e, _) in &terms {
            for k in 0..n {
                if e[k] != 0 {
                    used[k] = true;
                }
            }
        }
        if used.iter().all(|&u| u) {
            return Poly { vars: Arc::from(vars), terms };
        }
        let keep: Vec<usize> = (0..n).filter(|&k| used[k]).collect();
        let new_vars: Vec<Atom> = keep.iter().map(|&k| vars[k].clone()).collect();
        let terms = terms
            .into_iter()
            .map(|(e, c)| (keep.iter().map(|&k| e[k]).collect::<Exps>(), c))
            .collect();
        Poly { vars: Arc::from(new_vars), terms }
    }

    pub fn vars(&self) -> &[Atom] {
        &self.vars
    }

    pub fn terms(&self) -> &[(Exps, Rational)] {
        &self.terms
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.vars.is_empty() && self.terms.len() == 1 && self.terms[0].1.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn var_index(&self, a: &Atom) -> Option<usize> {
        self.vars.binary_search(a).ok()
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.var_index(a).is_some()
    }

    /// Leading term in lex order.
    pub fn leading(&self) -> Option<&(Exps, Rational)> {
        self.terms.last()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.terms.last().map(|t| t.1.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn degree_in(&self, k: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e[k]).max().unwrap_or(0)
    }

    pub fn degree_of(&self, a: &Atom) -> u32 {
        self.var_index(a).map(|k| self.degree_in(k)).unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Poly {
        Poly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        if s.is_one() {
            return self.clone();
        }
        Poly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    /// Re-expresses the terms over a larger sorted variable list.
    pub(crate) fn terms_over(&self, vars: &[Atom]) -> Vec<(Exps, Rational)> {
        if *self.vars == *vars {
            return self.terms.clone();
        }
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.binary_search(v).expect("variable missing from target list"))
            .collect();
        self.terms.iter().map(|(e, c)| (remap(e, &map, vars.len()), c.clone())).collect()
    }

    fn aligned(&self, other: &Poly) -> (Vec<Atom>, Vec<(Exps, Rational)>, Vec<(Exps, Rational)>) {
        if self.vars == other.vars {
            return (self.vars.to_vec(), self.terms.clone(), other.terms.clone());
        }
        let (vars, ma, mb) = union_vars(&self.vars, &other.vars);
        let n = vars.len();
        let ta = self.terms.iter().map(|(e, c)| (remap(e, &ma, n), c.clone())).collect();
        let tb = other.terms.iter().map(|(e, c)| (remap(e, &mb, n), c.clone())).collect();
        (vars, ta, tb)
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { other.neg() } else { other.clone() };
        }
        let (vars, ta, tb) = self.aligned(other);
        let mut out = Vec::with_capacity(ta.len() + tb.len());
        let mut ia = ta.into_iter().peekable();
        let mut ib = tb.into_iter().peekable();
        loop {
            let ord = match (ia.peek(), ib.peek()) {
                (None, None) => break,
                (Some(_), None) => std::cmp::Ordering::Less,
                (None, Some(_)) => std::cmp::Ordering::Greater,
                (Some(a), Some(b)) => a.0.cmp(&b.0),
            };
            match ord {
                std::cmp::Ordering::Less => out.push(ia.next().unwrap()),
                std::cmp::Ordering::Greater => {
                    let (e, c) = ib.next().unwrap();
                    out.push((e, if negate { -c } else { c }));
                }
                std::cmp::Ordering::Equal => {
                    let (e, ca) = ia.next().unwrap();
                    let (_, cb) = ib.next().unwrap();
                    let c = if negate { ca - cb } else { ca + cb };
                    if !c.is_zero() {
                        out.push((e, c));
                    }
                }
            }
        }
        Poly::from_sorted(vars, out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        let (vars, ta, tb) = self.aligned(other);
        let n = vars.len();
        let mut map: HashMap<Exps, Rational> = HashMap::with_capacity(ta.len() * tb.len());
        for (ea, ca) in &ta {
            for (eb, cb) in &tb {
                let mut e: Exps = SmallVec::with_capacity(n);
                for k in 0..n {
                    e.push(ea[k] + eb[k]);
                }
                let c = ca * cb;
                match map.get_mut(&e) {
                    Some(v) => *v += c,
                    None => {
                        map.insert(e, c);
                    }
                }
            }
        }
        Poly::from_map(vars, map)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Partial derivative with respect to the `k`-th variable, treating every
    /// atom as independent.
    pub fn diff_index(&self, k: usize) -> Poly {
        let vars = self.vars.to_vec();
        let terms: Vec<(Exps, Rational)> = self
            .terms
            .iter()
            .filter(|(e, _)| e[k] > 0)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[k] -= 1;
                (e2, c * &Rational::from(e[k] as i64))
            })
            .collect();
        let mut terms = terms;
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Poly::from_sorted(vars, terms)
    }

    pub fn diff_atom(&self, a: &Atom) -> Poly {
        match self.var_index(a) {
            Some(k) => self.diff_index(k),
            None => Poly::zero(),
        }
    }

    /// Coefficients of the powers of the `k`-th variable, as polynomials in
    /// the remaining variables.
    pub fn to_univariate(&self, k: usize) -> Vec<Poly> {
        let deg = self.degree_in(k) as usize;
        let rest: Vec<Atom> = self.vars.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, a)| a.clone()).collect();
        let mut buckets: Vec<Vec<(Exps, Rational)>> = vec![Vec::new(); deg + 1];
        for (e, c) in &self.terms {
            let mut e2: Exps = SmallVec::with_capacity(e.len() - 1);
            for (i, &x) in e.iter().enumerate() {
                if i != k {
                    e2.push(x);
                }
            }
            buckets[e[k] as usize].push((e2, c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut t| {
                t.sort_unstable_by(|a, b| a.0.cmp(&b.0));
                Poly::from_sorted(rest.clone(), t)
            })
            .collect()
    }

    pub fn from_univariate(x: &Atom, coeffs: &[Poly]) -> Poly {
        let mut acc = Poly::zero();
        let xp = Poly::atom(x.clone());
        for (d, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&c.mul(&xp.pow(d as u32)));
            }
        }
        acc
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_exps(&self) -> Exps {
        let n = self.vars.len();
        let mut m: Exps = SmallVec::from_elem(u32::MAX, n);
        for (e, _) in &self.terms {
            for k in 0..n {
                m[k] = m[k].min(e[k]);
            }
        }
        if self.terms.is_empty() {
            m.iter_mut().for_each(|x| *x = 0);
        }
        m
    }

    pub fn monomial(vars: &[Atom], e: Exps, c: Rational) -> Poly {
        Poly::from_sorted(vars.to_vec(), vec![(e, c)])
    }

    /// Divides by the monomial with exponents `m` (over this polynomial's own
    /// variable list); every term must be divisible.
    pub fn div_monomial(&self, m: &Exps) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(m.iter()).map(|(a, b)| a - b).collect::<Exps>(), c.clone()))
            .collect();
        Poly::from_sorted(self.vars.to_vec(), terms)
    }

    /// Writes `self = c * p` with `p` having coprime integer coefficients and
    /// a positive leading coefficient.
    pub fn primitive_integer(&self) -> (Rational, Poly) {
        if self.is_zero() {
            return (Rational::zero(), Poly::zero());
        }
        let mut lcm_den = BigInt::one();
        let mut gcd_num = BigInt::zero();
        for (_, c) in &self.terms {
            lcm_den = lcm_den.lcm(c.denom());
            gcd_num = gcd_num.gcd(c.numer());
        }
        let mut content = Rational::new(gcd_num, lcm_den);
        if self.leading_coeff().is_negative() {
            content = -content;
        }
        if content.is_one() {
            return (content, self.clone());
        }
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    /// Max absolute value of the coefficients of an integral polynomial.
    pub fn max_norm(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c.numer().abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        if self == divisor {
            return Some(Poly::one());
        }
        if !divisor.vars.iter().all(|v| self.contains(v)) {
            return None;
        }
        let vars: Vec<Atom> = self.vars.to_vec();
        let n = vars.len();
        let dterms = divisor.terms_over(&vars);
        let bounds: Vec<u32> = (0..n).map(|k| self.degree_in(k)).collect();
        for k in 0..n {
            let dd = dterms.iter().map(|(e, _)| e[k]).max().unwrap();
            if dd > bounds[k] {
                return None;
            }
        }
        let (lead_e, lead_c) = dterms.last().unwrap().clone();
        let lead_inv = lead_c.recip();
        let mut rem: BTreeMap<Exps, Rational> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Exps, Rational)> = Vec::new();
        while let Some((e, c)) = rem.pop_last() {
            if e.iter().zip(lead_e.iter()).any(|(a, b)| a < b) || e.iter().zip(&bounds).any(|(a, b)| a > b) {
                return None;
            }
            let qe: Exps = e.iter().zip(lead_e.iter()).map(|(a, b)| a - b).collect();
            let qc = &c * &lead_inv;
            for (de, dc) in dterms.iter().take(dterms.len() - 1) {
                let te: Exps = qe.iter().zip(de.iter()).map(|(a, b)| a + b).collect();
                let tc = &qc * dc;
                match rem.get_mut(&te) {
                    Some(v) => {
                        *v -= tc;
                        if v.is_zero() {
                            rem.remove(&te);
                        }
                    }
                    None => {
                        rem.insert(te, -tc);
                    }
                }
            }
            quot.push((qe, qc));
        }
        quot.reverse();
        Some(Poly::from_sorted(vars, quot))
    }

    /// Replaces atoms by other atoms (renaming, possibly merging).
    pub fn map_atoms(&self, f: impl Fn(&Atom) -> Atom) -> Poly {
        let new: Vec<Atom> = self.vars.iter().map(&f).collect();
        if new.iter().zip(self.vars.iter()).all(|(a, b)| a == b) {
            return self.clone();
        }
        let mut sorted = new.clone();
        sorted.sort();
        sorted.dedup();
        let map: Vec<usize> = new.iter().map(|a| sorted.binary_search(a).unwrap()).collect();
        let n = sorted.len();
        let terms = self.terms.iter().map(|(e, c)| {
            let mut out: Exps = SmallVec::from_elem(0, n);
            for (k, &p) in map.iter().enumerate() {
                out[p] += e[k];
            }
            (out, c.clone())
        });
        Poly::from_terms(sorted, terms.collect::<Vec<_>>())
    }

    /// Evaluates every variable mod `p`; `None` if a coefficient denominator
    /// vanishes mod `p`.
    pub fn eval_mod_p(&self, point: &[u64], p: u64) -> Option<u64> {
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut t = c.mod_p(p)?;
            for (k, &x) in e.iter().enumerate() {
                t = super::rational::mulmod(t, pow_mod(point[k], x as u64, p), p);
            }
            acc = (acc + t) % p;
        }
        Some(acc)
    }

    /// Image in `Z_p[x_k]` after evaluating the other variables at `point`.
    pub fn univariate_image(&self, k: usize, point: &[u64], p: u64) -> Option<Vec<u64>> {
        let deg = self.degree_in(k) as usize;
        let mut out = vec![0u64; deg + 1];
        for (e, c) in &self.terms {
            let mut t = c.mod_p(p)?;
            for (i, &x) in e.iter().enumerate() {
                if i != k {
                    t = super::rational::mulmod(t, pow_mod(point[i], x as u64, p), p);
                }
            }
            let d = e[k] as usize;
            out[d] = (out[d] + t) % p;
        }
        Some(out)
    }

    /// Evaluates at rational values for every variable, looked up by atom.
    pub fn eval(&self, value: impl Fn(&Atom) -> Option<Rational>) -> Option<Rational> {
        let vals: Vec<Rational> = self.vars.iter().map(&value).collect::<Option<_>>()?;
        let mut acc = Rational::zero();
        let mut cache: Vec<Vec<Rational>> = vals.iter().map(|v| vec![Rational::one(), v.clone()]).collect();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                while cache[k].len() <= x as usize {
                    let next = cache[k].last().unwrap() * &vals[k];
                    cache[k].push(next);
                }
                t *= &cache[k][x as usize];
            }
            acc += t;
        }
        Some(acc)
    }
}

pub(crate) fn pow_mod(b: u64, e: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = b % p;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = super::rational::mulmod(result, base, p);
        }
        base = super::rational::mulmod(base, base, p);
        e >>= 1;
    }
    result
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print_poly(self))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print_poly(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var("x")
    }
    fn y() -> Poly {
        Poly::var("y")
    }

    #[test]
    fn cancellation_prunes_variables() {
        let p = x().add(&y()).sub(&y());
        assert_eq!(p, x());
        assert_eq!(p.vars().len(), 1);
    }

    #[test]
    fn product_and_exact_division() {
        let a = x().add(&Poly::one());
        let b = x().sub(&y());
        let ab = a.mul(&b);
        assert_eq!(ab.div_exact(&a).unwrap(), b);
        assert!(ab.div_exact(&x()).is_none());
    }

    #[test]
    fn univariate_round_trip() {
        let p = x().pow(3).mul(&y()).add(&x().scale(&Rational::from(5))).add(&y());
        let k = p.var_index(&Atom::var("x")).unwrap();
        let u = p.to_univariate(k);
        assert_eq!(u.len(), 4);
        assert_eq!(Poly::from_univariate(&Atom::var("x"), &u), p);
    }

    #[test]
    fn primitive_part_is_integral() {
        let p = x().scale(&Rational::new(-2, 3)).add(&Poly::constant(Rational::new(4, 9)));
        let (c, pp) = p.primitive_integer();
        assert!(pp.is_integral());
        assert_eq!(pp.scale(&c), p);
        assert!(!pp.leading_coeff().is_negative());
    }
}
