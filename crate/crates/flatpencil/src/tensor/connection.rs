use super::{Chart, Matrix, MetricField, OneForm, TensorError, VectorField};
use crate::expr::RationalExpr;
use crate::report::{all_zero, Outcome};

/// Christoffel symbols `G^k_ij`, symmetric in `i, j`.
#[derive(Clone, PartialEq, Debug)]
pub struct ConnectionField {
    chart: Chart,
    gamma: Vec<RationalExpr>,
}

impl ConnectionField {
    /// Builds a connection from `f(k, i, j) = G^k_ij`, rejecting torsion.
    pub fn from_fn(chart: &Chart, mut f: impl FnMut(usize, usize, usize) -> RationalExpr) -> Result<ConnectionField, TensorError> {
        let n = chart.dim();
        let mut gamma = Vec::with_capacity(n * n * n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    gamma.push(f(k, i, j));
                }
            }
        }
        let c = ConnectionField { chart: chart.clone(), gamma };
        for k in 0..n {
            for i in 0..n {
                for j in i + 1..n {
                    if c.get(k, i, j) != c.get(k, j, i) {
                        return Err(TensorError::Torsion(k, i, j));
                    }
                }
            }
        }
        Ok(c)
    }

    pub fn flat(chart: &Chart) -> ConnectionField {
        let n = chart.dim();
        ConnectionField { chart: chart.clone(), gamma: vec![RationalExpr::zero(); n * n * n] }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// `G^k_ij`.
    pub fn get(&self, k: usize, i: usize, j: usize) -> &RationalExpr {
        let n = self.dim();
        &self.gamma[(k * n + i) * n + j]
    }

    pub fn components(&self) -> &[RationalExpr] {
        &self.gamma
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.iter().all(|g| g.is_zero())
    }

    /// `(nabla_X a)_j = X^i (d_i a_j - G^k_ij a_k)`.
    pub fn covariant_derivative_oneform(&self, x: &VectorField, a: &OneForm) -> Result<OneForm, TensorError> {
        self.chart.same(x.chart())?;
        self.chart.same(a.chart())?;
        let n = self.dim();
        let comps = (0..n)
            .map(|j| {
                let mut acc = RationalExpr::zero();
                for i in 0..n {
                    let xi = x.component(i);
                    if xi.is_zero() {
                        continue;
                    }
                    let mut t = a.component(j).diff(self.chart.coord(i));
                    for k in 0..n {
                        let ak = a.component(k);
                        if !ak.is_zero() {
                            t = t.sub(&self.get(k, i, j).mul(ak));
                        }
                    }
                    acc = acc.add(&xi.mul(&t));
                }
                acc
            })
            .collect();
        OneForm::new(&self.chart, comps)
    }

    /// `(nabla_X Y)^k = X^i (d_i Y^k + G^k_im Y^m)`.
    pub fn covariant_derivative_vector(&self, x: &VectorField, y: &VectorField) -> Result<VectorField, TensorError> {
        self.chart.same(x.chart())?;
        self.chart.same(y.chart())?;
        let n = self.dim();
        let comps = (0..n)
            .map(|k| {
                let mut acc = RationalExpr::zero();
                for i in 0..n {
                    let xi = x.component(i);
                    if xi.is_zero() {
                        continue;
                    }
                    let mut t = y.component(k).diff(self.chart.coord(i));
                    for m in 0..n {
                        let ym = y.component(m);
                        if !ym.is_zero() {
                            t = t.add(&self.get(k, i, m).mul(ym));
                        }
                    }
                    acc = acc.add(&xi.mul(&t));
                }
                acc
            })
            .collect();
        VectorField::new(&self.chart, comps)
    }

    /// The endomorphism `X -> nabla_X E`, as the matrix
    /// `(k, j) -> d_j E^k + G^k_jm E^m`.
    pub fn nabla_endomorphism(&self, e: &VectorField) -> Result<Matrix, TensorError> {
        self.chart.same(e.chart())?;
        let n = self.dim();
        Ok(Matrix::from_fn(n, n, |k, j| {
            let mut acc = e.component(k).diff(self.chart.coord(j));
            for m in 0..n {
                if !e.component(m).is_zero() {
                    acc = acc.add(&self.get(k, j, m).mul(e.component(m)));
                }
            }
            acc
        }))
    }

    /// `nabla g = 0`, componentwise.
    pub fn metric_defect(&self, g: &MetricField) -> Outcome {
        let n = self.dim();
        let lower = g.lower();
        let mut items = Vec::new();
        for k in 0..n {
            for i in 0..n {
                for j in i..n {
                    let mut v = lower.get(i, j).diff(self.chart.coord(k));
                    for m in 0..n {
                        v = v.sub(&self.get(m, k, i).mul(lower.get(m, j))).sub(&self.get(m, k, j).mul(lower.get(i, m)));
                    }
                    items.push((format!("(nabla_{} g)_{}{}", k + 1, i + 1, j + 1), v));
                }
            }
        }
        all_zero(items)
    }
}

/// `nabla_X E` for the endomorphism `nabla E`; convenience wrapper.
pub fn nabla_endomorphism_e(gamma: &ConnectionField, e: &VectorField) -> Result<Matrix, TensorError> {
    gamma.nabla_endomorphism(e)
}

pub fn covariant_derivative_oneform(gamma: &ConnectionField, x: &VectorField, a: &OneForm) -> Result<OneForm, TensorError> {
    gamma.covariant_derivative_oneform(x, a)
}

/// Levi-Civita connection:
/// `G^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)`.
pub fn christoffel(g: &MetricField) -> ConnectionField {
    let chart = g.chart();
    let n = chart.dim();
    let lower = g.lower();
    let upper = g.upper();
    let dg: Vec<Matrix> = chart.coords().iter().map(|c| lower.diff(c)).collect();
    let half = RationalExpr::frac(1, 2);
    let mut first = vec![RationalExpr::zero(); n * n * n];
    for l in 0..n {
        for i in 0..n {
            for j in i..n {
                let v = dg[i].get(j, l).add(dg[j].get(i, l)).sub(dg[l].get(i, j));
                first[(l * n + i) * n + j] = v;
            }
        }
    }
    let mut gamma = vec![RationalExpr::zero(); n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut acc = RationalExpr::zero();
                for l in 0..n {
                    let f = &first[(l * n + i) * n + j];
                    let u = upper.get(k, l);
                    if !f.is_zero() && !u.is_zero() {
                        acc = acc.add(&u.mul(f));
                    }
                }
                let v = acc.mul(&half);
                gamma[(k * n + j) * n + i] = v.clone();
                gamma[(k * n + i) * n + j] = v;
            }
        }
    }
    ConnectionField { chart: chart.clone(), gamma }
}
