//! The algebra of a pair of metrics: the product `a o b`, the integrability
//! tensor of `g* g~`, (almost) compatibility, flat pencils and the product
//! `u . v = u o T^-1(v)` with `T(u) = g(E) o u`.

mod bullet;
mod checks;
mod table;

use std::sync::OnceLock;

pub use bullet::{bullet_from_pencil, Bullet};
pub use checks::{check_auxiliary_identities, is_almost_compatible, is_compatible, is_flat_pencil};
pub use table::{MultiplicationTable, Space};

use crate::expr::{RationalExpr, RuleSet};
use crate::report::{all_zero_mod, Outcome};
use crate::tensor::{christoffel, riemann, Chart, ConnectionField, CurvatureField, Matrix, MetricField, TensorError};

/// Name of the pencil parameter in `g_l* = g* + l g~*`.
pub const LAMBDA: &str = "lambda";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PencilError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("the pencil g* + lambda g~* is degenerate")]
    DegeneratePencil,
    #[error("T(u) = g(E) o u is identically singular")]
    SingularT,
    #[error("chart uses the reserved name `{LAMBDA}`")]
    ReservedName,
}

/// Two metrics on one chart, with their connections computed on demand.
#[derive(Clone)]
pub struct MetricPair {
    g: MetricField,
    gt: MetricField,
    gamma_g: OnceLock<ConnectionField>,
    gamma_gt: OnceLock<ConnectionField>,
    circ: OnceLock<MultiplicationTable>,
    pencil: OnceLock<MetricField>,
    gamma_lambda: OnceLock<ConnectionField>,
    curvature_lambda: OnceLock<CurvatureField>,
    rules: RuleSet,
}

impl std::fmt::Debug for MetricPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MetricPair").field("g", &self.g).field("gt", &self.gt).finish()
    }
}

impl MetricPair {
    pub fn new(g: MetricField, gt: MetricField) -> Result<MetricPair, PencilError> {
        g.chart().same(gt.chart()).map_err(PencilError::Tensor)?;
        if g.chart().index_of(LAMBDA).is_some() {
            return Err(PencilError::ReservedName);
        }
        let lam = RationalExpr::var(LAMBDA);
        let upper = g.upper().add(&gt.upper().scale(&lam));
        let pencil = MetricField::contravariant(g.chart(), upper).map_err(|_| PencilError::DegeneratePencil)?;
        let pair = MetricPair {
            g,
            gt,
            gamma_g: OnceLock::new(),
            gamma_gt: OnceLock::new(),
            circ: OnceLock::new(),
            pencil: OnceLock::new(),
            gamma_lambda: OnceLock::new(),
            curvature_lambda: OnceLock::new(),
            rules: RuleSet::empty(),
        };
        let _ = pair.pencil.set(pencil);
        Ok(pair)
    }

    /// Installs relations for opaque functions in the metric entries; every
    /// identity is tested after reducing with them.
    pub fn with_rules(mut self, rules: RuleSet) -> MetricPair {
        self.circ = OnceLock::new();
        self.rules = rules;
        self
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    /// Reduces `e` with the installed rules.
    pub fn reduce(&self, e: &RationalExpr) -> RationalExpr {
        self.rules.apply(e).unwrap_or_else(|_| e.clone())
    }

    pub fn g(&self) -> &MetricField {
        &self.g
    }

    pub fn gt(&self) -> &MetricField {
        &self.gt
    }

    pub fn chart(&self) -> &Chart {
        self.g.chart()
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn gamma_g(&self) -> &ConnectionField {
        self.gamma_g.get_or_init(|| christoffel(&self.g))
    }

    pub fn gamma_gt(&self) -> &ConnectionField {
        self.gamma_gt.get_or_init(|| christoffel(&self.gt))
    }

    /// `(G~ - G)^k_ij`, the tensor `nabla^g~ - nabla^g`.
    pub fn difference(&self, k: usize, i: usize, j: usize) -> RationalExpr {
        self.gamma_gt().get(k, i, j).sub(self.gamma_g().get(k, i, j))
    }

    /// `g_l* = g* + l g~*`.
    pub fn pencil_metric(&self) -> &MetricField {
        self.pencil.get().expect("pencil metric is built on construction")
    }

    pub fn pencil_connection(&self) -> &ConnectionField {
        self.gamma_lambda.get_or_init(|| christoffel(self.pencil_metric()))
    }

    pub fn pencil_curvature(&self) -> &CurvatureField {
        self.curvature_lambda.get_or_init(|| riemann(self.pencil_connection()))
    }

    /// `a o b = nabla^g_{g* a} b - nabla^g~_{g* a} b` on coordinate
    /// 1-forms: `(dx^a o dx^b)_j = g^ai (G~ - G)^b_ij`.
    pub fn circ(&self) -> &MultiplicationTable {
        self.circ.get_or_init(|| {
            let n = self.dim();
            let up = self.g.upper();
            let diff: Vec<RationalExpr> =
                (0..n * n * n).map(|x| self.difference(x / (n * n), (x / n) % n, x % n)).collect();
            MultiplicationTable::from_fn(self.chart(), Space::Cotangent, |a, b, j| {
                (0..n)
                    .filter(|&i| !up.get(a, i).is_zero())
                    .map(|i| up.get(a, i).mul(&diff[(b * n + i) * n + j]))
                    .sum()
            })
            .with_rules(self.rules.clone())
        })
    }

    /// `K = g* g~` as an endomorphism of the tangent bundle.
    pub fn k_endomorphism(&self) -> EndomorphismField {
        EndomorphismField { chart: self.chart().clone(), m: self.g.upper().mul(self.gt.lower()) }
    }

    /// `(W^2 g, W^2 g~)`.
    pub fn scaled(&self, omega: &RationalExpr) -> Result<MetricPair, PencilError> {
        let w2 = omega.square();
        Ok(MetricPair::new(self.g.scaled(&w2)?, self.gt.scaled(&w2)?)?.with_rules(self.rules.clone()))
    }
}

/// A `(1,1)` tensor: `K(d_b) = sum_k m[k][b] d_k`.
#[derive(Clone, PartialEq, Debug)]
pub struct EndomorphismField {
    chart: Chart,
    m: Matrix,
}

impl EndomorphismField {
    pub fn new(chart: &Chart, m: Matrix) -> Result<EndomorphismField, TensorError> {
        if m.rows() != chart.dim() || m.cols() != chart.dim() {
            return Err(TensorError::DimensionMismatch { expected: chart.dim(), found: m.rows() });
        }
        Ok(EndomorphismField { chart: chart.clone(), m })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn components(&self) -> &Matrix {
        &self.m
    }
}

/// Components of `N_K(d_a, d_b) = -[K d_a, K d_b] + K[K d_a, d_b] + K[d_a, K d_b]`,
/// stored at `(a * n + b) * n + k`.
pub fn nijenhuis(k: &EndomorphismField) -> Vec<RationalExpr> {
    let chart = &k.chart;
    let n = chart.dim();
    let m = &k.m;
    let col = |a: usize| -> Vec<RationalExpr> { (0..n).map(|r| m.get(r, a).clone()).collect() };
    let bracket = |u: &[RationalExpr], v: &[RationalExpr]| -> Vec<RationalExpr> {
        (0..n)
            .map(|r| {
                let mut acc = RationalExpr::zero();
                for i in 0..n {
                    if !u[i].is_zero() {
                        acc = acc.add(&u[i].mul(&v[r].diff(chart.coord(i))));
                    }
                    if !v[i].is_zero() {
                        acc = acc.sub(&v[i].mul(&u[r].diff(chart.coord(i))));
                    }
                }
                acc
            })
            .collect()
    };
    let mut out = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            let (ka, kb) = (col(a), col(b));
            let t1 = bracket(&ka, &kb);
            // [K d_a, d_b] = -d_b(K d_a); [d_a, K d_b] = d_a(K d_b)
            let s: Vec<RationalExpr> =
                (0..n).map(|r| kb[r].diff(chart.coord(a)).sub(&ka[r].diff(chart.coord(b)))).collect();
            let ks = m.mul_vec(&s);
            for r in 0..n {
                out.push(ks[r].sub(&t1[r]));
            }
        }
    }
    out
}

pub(crate) fn nijenhuis_vanishes(k: &EndomorphismField, rules: &RuleSet) -> Outcome {
    let n = k.chart.dim();
    all_zero_mod(nijenhuis(k).into_iter().enumerate().map(|(x, v)| (format!("N_K(d{}, d{})^{}", x / (n * n) + 1, (x / n) % n + 1, x % n + 1), v)), rules)
}

/// `circ_multiplication` as a free function.
pub fn circ_multiplication(p: &MetricPair) -> MultiplicationTable {
    p.circ().clone()
}
