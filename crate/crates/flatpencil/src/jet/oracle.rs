use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::eval::small_rational;
use super::{eval_at, jet_eval, FunctionSamples, Jet2, JetError, Point};
use crate::expr::Rational;
use crate::report::Report;
use crate::tensor::{christoffel, riemann, MetricField, Variance};

/// Christoffel symbols and curvature at a point.
#[derive(Clone, PartialEq, Debug)]
pub struct OracleCurvature {
    n: usize,
    christoffel: Vec<Rational>,
    riemann: Vec<Rational>,
}

impl OracleCurvature {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `G^k_ij`.
    pub fn christoffel(&self, k: usize, i: usize, j: usize) -> &Rational {
        &self.christoffel[(k * self.n + i) * self.n + j]
    }

    /// `R^l_kij`, in the same convention as [`riemann`].
    pub fn riemann(&self, l: usize, k: usize, i: usize, j: usize) -> &Rational {
        &self.riemann[((l * self.n + k) * self.n + i) * self.n + j]
    }

    /// `R_lkij = g_lm R^m_kij` for the metric values `g` at the point.
    pub fn lowered(&self, g: &[Rational], l: usize, k: usize, i: usize, j: usize) -> Rational {
        (0..self.n).fold(Rational::zero(), |acc, m| &acc + &(&g[l * self.n + m] * self.riemann(m, k, i, j)))
    }
}

fn inverse(a: &[Rational], n: usize) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row = a[i * n..(i + 1) * n].to_vec();
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot = m[col].clone();
                for (v, pv) in m[r].iter_mut().zip(&pivot) {
                    *v = &*v - &(&f * pv);
                }
            }
        }
    }
    Some(m.into_iter().flat_map(|row| row[n..].to_vec()).collect())
}

/// Inverts a symmetric matrix of jets by Gauss-Jordan elimination in jet
/// arithmetic.
fn invert_jets(a: &[Jet2], n: usize) -> Result<Vec<Jet2>, JetError> {
    let d = a.first().map_or(0, Jet2::dim);
    let mut m: Vec<Vec<Jet2>> = (0..n)
        .map(|i| {
            let mut row = a[i * n..(i + 1) * n].to_vec();
            row.extend((0..n).map(|j| if i == j { Jet2::one(d) } else { Jet2::zero(d) }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].value.is_zero()).ok_or(JetError::SingularAtPoint)?;
        m.swap(col, p);
        let inv = m[col][col].recip()?;
        for v in m[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col {
                let f = m[r][col].clone();
                let pivot = m[col].clone();
                for (v, pv) in m[r].iter_mut().zip(&pivot) {
                    *v = &*v - &(&f * pv);
                }
            }
        }
    }
    Ok(m.into_iter().flat_map(|row| row[n..].to_vec()).collect())
}

/// Jets of the covariant components `g_ij`. A contravariant metric is
/// inverted in jet arithmetic, so the symbolic inverse is not used.
pub fn metric_jets(g: &MetricField, point: &Point, samples: &FunctionSamples) -> Result<Vec<Jet2>, JetError> {
    let n = g.dim();
    let comps: Vec<Jet2> = g.components().entries().iter().map(|e| jet_eval(e, point, samples)).collect::<Result<_, _>>()?;
    match g.variance() {
        Variance::Covariant => Ok(comps),
        Variance::Contravariant => invert_jets(&comps, n),
    }
}

/// Christoffel symbols from first jets and curvature from second jets of
/// the covariant metric `g` (row-major, `n x n`).
pub fn oracle_curvature(g: &[Jet2]) -> Result<OracleCurvature, JetError> {
    let n = (g.len() as f64).sqrt() as usize;
    if n * n != g.len() || n == 0 {
        return Err(JetError::DimensionMismatch { expected: n * n, found: g.len() });
    }
    let values: Vec<Rational> = g.iter().map(|j| j.value.clone()).collect();
    let ginv = inverse(&values, n).ok_or(JetError::SingularAtPoint)?;
    let gv = |a: usize, b: usize| &g[a * n + b];
    let half = Rational::new(1, 2);
    // Christoffel symbols of the first kind and their first derivatives.
    let first = |l: usize, i: usize, j: usize| -> Rational {
        &(&(&gv(j, l).gradient[i] + &gv(i, l).gradient[j]) - &gv(i, j).gradient[l]) * &half
    };
    let first_d = |p: usize, l: usize, i: usize, j: usize| -> Rational {
        &(&(&gv(j, l).hessian[p][i] + &gv(i, l).hessian[p][j]) - &gv(i, j).hessian[p][l]) * &half
    };
    let ginv_d = |p: usize, k: usize, l: usize| -> Rational {
        let mut acc = Rational::zero();
        for a in 0..n {
            for b in 0..n {
                acc -= &(&ginv[k * n + a] * &gv(a, b).gradient[p]) * &ginv[b * n + l];
            }
        }
        acc
    };
    let mut gamma = vec![Rational::zero(); n * n * n];
    let mut dgamma = vec![Rational::zero(); n * n * n * n];
    let ginv_ds: Vec<Rational> = (0..n * n * n).map(|x| ginv_d(x / (n * n), (x / n) % n, x % n)).collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut v = Rational::zero();
                for l in 0..n {
                    v += &ginv[k * n + l] * &first(l, i, j);
                }
                gamma[(k * n + i) * n + j] = v;
                for p in 0..n {
                    let mut d = Rational::zero();
                    for l in 0..n {
                        d += &ginv_ds[(p * n + k) * n + l] * &first(l, i, j);
                        d += &ginv[k * n + l] * &first_d(p, l, i, j);
                    }
                    dgamma[((p * n + k) * n + i) * n + j] = d;
                }
            }
        }
    }
    let gm = |k: usize, i: usize, j: usize| &gamma[(k * n + i) * n + j];
    let dg = |p: usize, k: usize, i: usize, j: usize| &dgamma[((p * n + k) * n + i) * n + j];
    let mut r = vec![Rational::zero(); n * n * n * n];
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut v = dg(i, l, j, k) - dg(j, l, i, k);
                    for m in 0..n {
                        v += gm(l, i, m) * gm(m, j, k);
                        v -= gm(l, j, m) * gm(m, i, k);
                    }
                    r[((l * n + k) * n + i) * n + j] = v;
                }
            }
        }
    }
    Ok(OracleCurvature { n, christoffel: gamma, riemann: r })
}

/// Parameters of `g`: variables in its components that are not coordinates.
pub fn metric_parameters(g: &MetricField) -> Vec<String> {
    let mut vars = BTreeSet::new();
    for e in g.components().entries() {
        e.collect_free_vars(&mut vars);
    }
    vars.iter().map(|v| v.to_string()).filter(|v| g.chart().index_of(v).is_none()).collect()
}

/// Draws `count` random points for `g` (coordinates and parameters with
/// numerator and denominator at most 100), rejecting points where the
/// metric or the symbolic `values` to be compared have a pole, or the
/// metric is singular.
pub fn random_points(g: &MetricField, count: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = metric_parameters(g);
    let samples = FunctionSamples::seeded(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 100 * count.max(1) {
        attempts += 1;
        let coords = (0..g.dim()).map(|_| small_rational(&mut rng)).collect();
        let mut p = Point::new(g.chart(), coords).expect("dimension matches");
        for name in &params {
            p.params.insert(name.clone(), small_rational(&mut rng));
        }
        if metric_jets(g, &p, &samples).and_then(|j| oracle_curvature(&j)).is_ok() {
            out.push(p);
        }
    }
    out
}

/// Compares the symbolic Christoffel symbols and curvature of `g` with the
/// jet oracle at `count` random points drawn from `seed`. Opaque functions
/// get seeded sample values.
pub fn oracle_agreement(g: &MetricField, count: usize, seed: u64) -> Report {
    let mut report = Report::new(format!("jet oracle on {}", g.chart().name()));
    report.fact("seed", seed);
    let samples = FunctionSamples::seeded(seed);
    let gamma = christoffel(g);
    let r = riemann(&gamma);
    let n = g.dim();
    let mut used = 0;
    let mut checked = 0usize;
    let mut failure: Option<String> = None;
    for p in random_points(g, count + count / 2 + 5, seed) {
        if used == count {
            break;
        }
        let Ok(oracle) = metric_jets(g, &p, &samples).and_then(|j| oracle_curvature(&j)) else { continue };
        let sym_gamma: Result<Vec<Rational>, _> = gamma.components().iter().map(|e| eval_at(e, &p, &samples)).collect();
        let sym_r: Result<Vec<Rational>, _> = r.components().iter().map(|e| eval_at(e, &p, &samples)).collect();
        let (Ok(sym_gamma), Ok(sym_r)) = (sym_gamma, sym_r) else { continue };
        used += 1;
        if failure.is_some() {
            continue;
        }
        for (x, s) in sym_gamma.iter().enumerate() {
            let (k, i, j) = (x / (n * n), (x / n) % n, x % n);
            checked += 1;
            if s != oracle.christoffel(k, i, j) {
                failure = Some(format!("G^{}_{}{} at {p}: symbolic {s}, oracle {}", k + 1, i + 1, j + 1, oracle.christoffel(k, i, j)));
                break;
            }
        }
        if failure.is_some() {
            continue;
        }
        for (x, s) in sym_r.iter().enumerate() {
            let (l, k, i, j) = (x / (n * n * n), (x / (n * n)) % n, (x / n) % n, x % n);
            checked += 1;
            if s != oracle.riemann(l, k, i, j) {
                failure = Some(format!("R^{}_{}{}{} at {p}: symbolic {s}, oracle {}", l + 1, k + 1, i + 1, j + 1, oracle.riemann(l, k, i, j)));
                break;
            }
        }
    }
    report.fact("points", used);
    report.fact("components compared", checked);
    report.record("points-drawn", "enough sample points avoid poles", if used == count { Ok(()) } else { Err(format!("only {used} of {count} usable points")) });
    report.record("agreement", "symbolic connection and curvature match the jet oracle", failure.map_or(Ok(()), Err));
    report
}
