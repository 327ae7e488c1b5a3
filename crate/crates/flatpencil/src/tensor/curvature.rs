use super::{christoffel, Chart, ConnectionField, MetricField};
use crate::expr::RationalExpr;
use crate::report::{all_zero, Outcome};

/// Curvature components `R^l_kij` of `R(d_i, d_j) d_k`.
#[derive(Clone, PartialEq, Debug)]
pub struct CurvatureField {
    chart: Chart,
    r: Vec<RationalExpr>,
}

fn idx(n: usize, a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * n + b) * n + c) * n + d
}

/// `R^l_kij = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik`.
pub fn riemann(gamma: &ConnectionField) -> CurvatureField {
    let chart = gamma.chart();
    let n = chart.dim();
    let mut r = vec![RationalExpr::zero(); n * n * n * n];
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in i + 1..n {
                    let mut v = gamma.get(l, j, k).diff(chart.coord(i)).sub(&gamma.get(l, i, k).diff(chart.coord(j)));
                    for m in 0..n {
                        let a = gamma.get(l, i, m);
                        let b = gamma.get(m, j, k);
                        if !a.is_zero() && !b.is_zero() {
                            v = v.add(&a.mul(b));
                        }
                        let a = gamma.get(l, j, m);
                        let b = gamma.get(m, i, k);
                        if !a.is_zero() && !b.is_zero() {
                            v = v.sub(&a.mul(b));
                        }
                    }
                    r[idx(n, l, k, j, i)] = v.neg();
                    r[idx(n, l, k, i, j)] = v;
                }
            }
        }
    }
    CurvatureField { chart: chart.clone(), r }
}

impl CurvatureField {
    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    /// `R^l_kij`.
    pub fn get(&self, l: usize, k: usize, i: usize, j: usize) -> &RationalExpr {
        &self.r[idx(self.chart.dim(), l, k, i, j)]
    }

    pub fn components(&self) -> &[RationalExpr] {
        &self.r
    }

    pub fn is_zero(&self) -> bool {
        self.r.iter().all(|v| v.is_zero())
    }

    /// First nonzero component as a witness.
    pub fn vanishes(&self) -> Outcome {
        let n = self.chart.dim();
        all_zero(self.indexed(n).map(|(l, k, i, j)| (format!("R^{}_{}{}{}", l + 1, k + 1, i + 1, j + 1), self.get(l, k, i, j).clone())))
    }

    fn indexed(&self, n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
        (0..n * n * n * n).map(move |x| (x / (n * n * n), (x / (n * n)) % n, (x / n) % n, x % n))
    }

    pub fn antisymmetry(&self) -> Outcome {
        let n = self.chart.dim();
        all_zero(
            self.indexed(n)
                .filter(|&(_, _, i, j)| i <= j)
                .map(|(l, k, i, j)| (format!("R^{0}_{1}{2}{3} + R^{0}_{1}{3}{2}", l + 1, k + 1, i + 1, j + 1), self.get(l, k, i, j).add(self.get(l, k, j, i)))),
        )
    }

    /// `R^l_kij + R^l_ijk + R^l_jki = 0`.
    pub fn first_bianchi(&self) -> Outcome {
        let n = self.chart.dim();
        all_zero(self.indexed(n).map(|(l, k, i, j)| {
            let v = self.get(l, k, i, j).add(self.get(l, i, j, k)).add(self.get(l, j, k, i));
            (format!("Bianchi l={} k={} i={} j={}", l + 1, k + 1, i + 1, j + 1), v)
        }))
    }

    /// `R_lkij = g_lm R^m_kij`.
    pub fn lowered(&self, g: &MetricField) -> LoweredCurvature {
        let n = self.chart.dim();
        let lower = g.lower();
        let r = (0..n * n * n * n)
            .map(|x| {
                let (l, rest) = (x / (n * n * n), x % (n * n * n));
                (0..n)
                    .filter(|&m| !lower.get(l, m).is_zero())
                    .map(|m| lower.get(l, m).mul(&self.r[m * n * n * n + rest]))
                    .sum()
            })
            .collect();
        LoweredCurvature { n, r }
    }
}

/// Fully covariant curvature `R_lkij`.
#[derive(Clone, PartialEq, Debug)]
pub struct LoweredCurvature {
    n: usize,
    r: Vec<RationalExpr>,
}

impl LoweredCurvature {
    pub fn get(&self, l: usize, k: usize, i: usize, j: usize) -> &RationalExpr {
        &self.r[idx(self.n, l, k, i, j)]
    }

    /// `R_lkij = R_ijlk`.
    pub fn pair_symmetry(&self) -> Outcome {
        let n = self.n;
        let mut items = Vec::new();
        for l in 0..n {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        items.push((format!("R_{}{}{}{} - R_{}{}{}{}", l + 1, k + 1, i + 1, j + 1, i + 1, j + 1, l + 1, k + 1), self.get(l, k, i, j).sub(self.get(i, j, l, k))));
                    }
                }
            }
        }
        all_zero(items)
    }
}

fn shape(g: &MetricField, l: usize, k: usize, i: usize, j: usize) -> RationalExpr {
    let m = g.lower();
    m.get(l, i).mul(m.get(k, j)).sub(&m.get(l, j).mul(m.get(k, i)))
}

/// The constant `s` with `R_lkij = s (g_li g_kj - g_lj g_ki)`, if the lowered
/// curvature has that shape. `s` may involve parameters but not coordinates.
pub fn sectional_constant(r: &LoweredCurvature, g: &MetricField) -> Option<RationalExpr> {
    let n = g.dim();
    let mut s: Option<RationalExpr> = None;
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in i + 1..n {
                    let sh = shape(g, l, k, i, j);
                    let v = r.get(l, k, i, j);
                    match &s {
                        None => {
                            if sh.is_zero() {
                                if !v.is_zero() {
                                    return None;
                                }
                                continue;
                            }
                            let cand = v.div(&sh);
                            if !g.chart().is_constant(&cand) {
                                return None;
                            }
                            s = Some(cand);
                        }
                        Some(c) => {
                            if *v != sh.mul(c) {
                                return None;
                            }
                        }
                    }
                }
            }
        }
    }
    Some(s.unwrap_or_else(RationalExpr::zero))
}

/// Computes the curvature of `g` and tests for constant sectional
/// curvature. `Some(0)` means flat.
pub fn constant_sectional_curvature(g: &MetricField) -> Option<RationalExpr> {
    let r = riemann(&christoffel(g));
    sectional_constant(&r.lowered(g), g)
}
