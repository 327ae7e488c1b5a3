use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Jet2, JetError};
use crate::expr::{Atom, FuncAtom, Poly, Rational, RationalExpr};
use crate::tensor::Chart;

/// Coordinate values on a chart, plus values for parameters such as `c`
/// and `d` that appear in expressions but are not coordinates.
#[derive(Clone, PartialEq, Debug)]
pub struct Point {
    pub chart: Chart,
    pub coords: Vec<Rational>,
    pub params: BTreeMap<String, Rational>,
}

impl Point {
    pub fn new(chart: &Chart, coords: Vec<Rational>) -> Result<Point, JetError> {
        if coords.len() != chart.dim() {
            return Err(JetError::DimensionMismatch { expected: chart.dim(), found: coords.len() });
        }
        Ok(Point { chart: chart.clone(), coords, params: BTreeMap::new() })
    }

    pub fn with_param(mut self, name: &str, value: Rational) -> Point {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    fn value_of(&self, name: &str) -> Option<Rational> {
        match self.chart.index_of(name) {
            Some(i) => Some(self.coords[i].clone()),
            None => self.params.get(name).cloned(),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.chart.coords().iter().zip(&self.coords).map(|(c, v)| format!("{c} = {v}")).collect();
        parts.extend(self.params.iter().map(|(k, v)| format!("{k} = {v}")));
        write!(f, "({})", parts.join(", "))
    }
}

type SampleKey = (String, Vec<u32>, Vec<Rational>);

/// Values of opaque function derivatives `D^index f(at)`.
///
/// Explicit entries take precedence. A seeded instance answers every other
/// query with a deterministic pseudo-random small rational, which makes it
/// usable for cross-checks where the function is arbitrary.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FunctionSamples {
    explicit: BTreeMap<SampleKey, Rational>,
    seed: Option<u64>,
}

impl FunctionSamples {
    pub fn new() -> FunctionSamples {
        FunctionSamples::default()
    }

    pub fn seeded(seed: u64) -> FunctionSamples {
        FunctionSamples { explicit: BTreeMap::new(), seed: Some(seed) }
    }

    pub fn insert(&mut self, name: &str, index: Vec<u32>, at: Vec<Rational>, value: Rational) {
        self.explicit.insert((name.to_string(), index, at), value);
    }

    pub fn get(&self, name: &str, index: &[u32], at: &[Rational]) -> Option<Rational> {
        let key = (name.to_string(), index.to_vec(), at.to_vec());
        if let Some(v) = self.explicit.get(&key) {
            return Some(v.clone());
        }
        let seed = self.seed?;
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in format!("{name}|{index:?}|{at:?}").bytes() {
            h = (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3);
        }
        Some(small_rational(&mut ChaCha8Rng::seed_from_u64(seed ^ h)))
    }
}

/// A rational `p/q` with `|p| <= 100` and `1 <= q <= 100`.
pub fn small_rational(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.gen_range(-100i64..=100), rng.gen_range(1i64..=100))
}

fn missing(f: &FuncAtom, index: &[u32], at: &[Rational]) -> JetError {
    let at: Vec<String> = at.iter().map(|a| a.to_string()).collect();
    JetError::MissingFunctionSample(format!("{} with derivative index {:?} at ({})", f.name, index, at.join(", ")))
}

fn unbound(name: &str) -> JetError {
    JetError::UnboundVariable(name.to_string())
}

/// The value of `e` at `point`, by substitution.
pub fn eval_at(e: &RationalExpr, point: &Point, samples: &FunctionSamples) -> Result<Rational, JetError> {
    let num = eval_poly(e.numer(), point, samples)?;
    let den = eval_poly(e.denom(), point, samples)?;
    if den.is_zero() {
        return Err(JetError::PoleAtPoint(format!("denominator vanishes at {point}")));
    }
    Ok(num / den)
}

fn eval_poly(p: &Poly, point: &Point, samples: &FunctionSamples) -> Result<Rational, JetError> {
    let values: Vec<Rational> = p.vars().iter().map(|a| eval_atom(a, point, samples)).collect::<Result<_, _>>()?;
    Ok(p.eval(|a| p.var_index(a).map(|k| values[k].clone())).expect("every atom has a value"))
}

fn eval_atom(a: &Atom, point: &Point, samples: &FunctionSamples) -> Result<Rational, JetError> {
    match a {
        Atom::Var(v) => point.value_of(v).ok_or_else(|| unbound(v)),
        Atom::Func(f) => {
            let at: Vec<Rational> = f.args.iter().map(|x| eval_at(x, point, samples)).collect::<Result<_, _>>()?;
            samples.get(&f.name, &f.index, &at).ok_or_else(|| missing(f, &f.index, &at))
        }
    }
}

/// The second-order jet of `e` at `point`, computed by jet arithmetic
/// without symbolic differentiation.
pub fn jet_eval(e: &RationalExpr, point: &Point, samples: &FunctionSamples) -> Result<Jet2, JetError> {
    let num = jet_poly(e.numer(), point, samples)?;
    let den = jet_poly(e.denom(), point, samples)?;
    if den.value.is_zero() {
        return Err(JetError::PoleAtPoint(format!("denominator vanishes at {point}")));
    }
    num.div(&den)
}

fn jet_poly(p: &Poly, point: &Point, samples: &FunctionSamples) -> Result<Jet2, JetError> {
    let n = point.dim();
    let atoms: Vec<Jet2> = p.vars().iter().map(|a| jet_atom(a, point, samples)).collect::<Result<_, _>>()?;
    let mut powers: Vec<Vec<Jet2>> = atoms.iter().map(|j| vec![Jet2::one(n), j.clone()]).collect();
    let mut acc = Jet2::zero(n);
    for (e, c) in p.terms() {
        let mut t = Jet2::constant(n, c.clone());
        for (k, &x) in e.iter().enumerate() {
            if x == 0 {
                continue;
            }
            while powers[k].len() <= x as usize {
                let next = powers[k].last().expect("nonempty") * &atoms[k];
                powers[k].push(next);
            }
            t = &t * &powers[k][x as usize];
        }
        acc = &acc + &t;
    }
    Ok(acc)
}

fn jet_atom(a: &Atom, point: &Point, samples: &FunctionSamples) -> Result<Jet2, JetError> {
    let n = point.dim();
    match a {
        Atom::Var(v) => match point.chart.index_of(v) {
            Some(i) => Ok(Jet2::variable(n, i, point.coords[i].clone())),
            None => point.params.get(&**v).map(|c| Jet2::constant(n, c.clone())).ok_or_else(|| unbound(v)),
        },
        Atom::Func(f) => {
            let args: Vec<Jet2> = f.args.iter().map(|x| jet_eval(x, point, samples)).collect::<Result<_, _>>()?;
            let at: Vec<Rational> = args.iter().map(|j| j.value.clone()).collect();
            let sample = |bump: &[usize]| {
                let mut index = f.index.clone();
                for &p in bump {
                    index[p] += 1;
                }
                samples.get(&f.name, &index, &at).ok_or_else(|| missing(f, &index, &at))
            };
            let m = args.len();
            let mut jet = Jet2::constant(n, sample(&[])?);
            for p in 0..m {
                let ap = &args[p];
                if ap.gradient.iter().all(Rational::is_zero) && ap.hessian.iter().flatten().all(Rational::is_zero) {
                    continue;
                }
                let d = sample(&[p])?;
                for i in 0..n {
                    jet.gradient[i] += &d * &ap.gradient[i];
                    for j in 0..n {
                        jet.hessian[i][j] += &d * &ap.hessian[i][j];
                    }
                }
                for q in 0..m {
                    let aq = &args[q];
                    if aq.gradient.iter().all(Rational::is_zero) || ap.gradient.iter().all(Rational::is_zero) {
                        continue;
                    }
                    let dd = sample(&[p, q])?;
                    for i in 0..n {
                        for j in 0..n {
                            jet.hessian[i][j] += &dd * &(&ap.gradient[i] * &aq.gradient[j]);
                        }
                    }
                }
            }
            Ok(jet)
        }
    }
}
