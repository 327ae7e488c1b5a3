use std::fmt;

use super::{Chart, Matrix, TensorError};
use crate::expr::RationalExpr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variance {
    Covariant,
    Contravariant,
}

/// A metric in one chart. Both index positions are kept: the one it was
/// built from and the inverse, computed once.
#[derive(Clone, PartialEq)]
pub struct MetricField {
    chart: Chart,
    variance: Variance,
    lower: Matrix,
    upper: Matrix,
}

impl MetricField {
    pub fn new(chart: &Chart, variance: Variance, components: Matrix) -> Result<MetricField, TensorError> {
        let n = chart.dim();
        if components.rows() != n || components.cols() != n {
            return Err(TensorError::DimensionMismatch { expected: n, found: components.rows().max(components.cols()) });
        }
        if let Some((i, j)) = components.asymmetry() {
            return Err(TensorError::NotSymmetric(i, j));
        }
        let inv = components.inverse().map_err(|_| TensorError::SingularMetric)?;
        let (lower, upper) = match variance {
            Variance::Covariant => (components, inv),
            Variance::Contravariant => (inv, components),
        };
        Ok(MetricField { chart: chart.clone(), variance, lower, upper })
    }

    pub fn covariant(chart: &Chart, components: Matrix) -> Result<MetricField, TensorError> {
        MetricField::new(chart, Variance::Covariant, components)
    }

    pub fn contravariant(chart: &Chart, components: Matrix) -> Result<MetricField, TensorError> {
        MetricField::new(chart, Variance::Contravariant, components)
    }

    /// `sum dx_i^2`.
    pub fn euclidean(chart: &Chart) -> MetricField {
        let n = chart.dim();
        MetricField { chart: chart.clone(), variance: Variance::Covariant, lower: Matrix::identity(n), upper: Matrix::identity(n) }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    /// Components in the index position the metric was given in.
    pub fn components(&self) -> &Matrix {
        match self.variance {
            Variance::Covariant => &self.lower,
            Variance::Contravariant => &self.upper,
        }
    }

    /// `g_ij`.
    pub fn lower(&self) -> &Matrix {
        &self.lower
    }

    /// `g^ij`.
    pub fn upper(&self) -> &Matrix {
        &self.upper
    }

    /// The same metric presented in the other index position.
    pub fn dual(&self) -> MetricField {
        let variance = match self.variance {
            Variance::Covariant => Variance::Contravariant,
            Variance::Contravariant => Variance::Covariant,
        };
        MetricField { variance, ..self.clone() }
    }

    /// `g(X)`, the 1-form `g(X, .)`.
    pub fn flat(&self, x: &VectorField) -> OneForm {
        OneForm { chart: self.chart.clone(), comps: self.lower.mul_vec(&x.comps) }
    }

    /// `g* a`, the vector with `b(g* a) = g*(a, b)`.
    pub fn sharp(&self, a: &OneForm) -> VectorField {
        VectorField { chart: self.chart.clone(), comps: self.upper.mul_vec(&a.comps) }
    }

    /// `g*(a, b)`.
    pub fn inner_forms(&self, a: &OneForm, b: &OneForm) -> RationalExpr {
        dot(&self.upper.mul_vec(&a.comps), &b.comps)
    }

    /// `g(X, Y)`.
    pub fn inner_vectors(&self, x: &VectorField, y: &VectorField) -> RationalExpr {
        dot(&self.lower.mul_vec(&x.comps), &y.comps)
    }

    /// The metric `f * g`.
    pub fn scaled(&self, f: &RationalExpr) -> Result<MetricField, TensorError> {
        if f.is_zero() {
            return Err(TensorError::ZeroConformalFactor);
        }
        let inv = f.recip()?;
        Ok(MetricField { chart: self.chart.clone(), variance: self.variance, lower: self.lower.scale(f), upper: self.upper.scale(&inv) })
    }

    /// True when all components are free of the chart coordinates.
    pub fn is_constant(&self) -> bool {
        self.components().entries().iter().all(|e| self.chart.is_constant(e))
    }
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MetricField({:?}, {:?}, {})", self.chart, self.variance, self.components())
    }
}

pub(crate) fn dot(a: &[RationalExpr], b: &[RationalExpr]) -> RationalExpr {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x.mul(y)).sum()
}

/// Components `X^i` of a vector field.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    chart: Chart,
    comps: Vec<RationalExpr>,
}

/// Components `a_i` of a 1-form.
#[derive(Clone, PartialEq, Eq)]
pub struct OneForm {
    chart: Chart,
    comps: Vec<RationalExpr>,
}

macro_rules! component_field {
    ($t:ident) => {
        impl $t {
            pub fn new(chart: &Chart, comps: Vec<RationalExpr>) -> Result<$t, TensorError> {
                if comps.len() != chart.dim() {
                    return Err(TensorError::DimensionMismatch { expected: chart.dim(), found: comps.len() });
                }
                Ok($t { chart: chart.clone(), comps })
            }

            pub fn zero(chart: &Chart) -> $t {
                $t { chart: chart.clone(), comps: vec![RationalExpr::zero(); chart.dim()] }
            }

            /// The `i`-th coordinate basis element.
            pub fn basis(chart: &Chart, i: usize) -> $t {
                let mut comps = vec![RationalExpr::zero(); chart.dim()];
                comps[i] = RationalExpr::one();
                $t { chart: chart.clone(), comps }
            }

            pub fn chart(&self) -> &Chart {
                &self.chart
            }

            pub fn comps(&self) -> &[RationalExpr] {
                &self.comps
            }

            pub fn component(&self, i: usize) -> &RationalExpr {
                &self.comps[i]
            }

            pub fn add(&self, other: &$t) -> $t {
                $t { chart: self.chart.clone(), comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect() }
            }

            pub fn sub(&self, other: &$t) -> $t {
                $t { chart: self.chart.clone(), comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.sub(b)).collect() }
            }

            pub fn scale(&self, f: &RationalExpr) -> $t {
                $t { chart: self.chart.clone(), comps: self.comps.iter().map(|a| a.mul(f)).collect() }
            }

            pub fn is_zero(&self) -> bool {
                self.comps.iter().all(|c| c.is_zero())
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "(")?;
                for (i, c) in self.comps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }

        impl fmt::Debug for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}{}", stringify!($t), self)
            }
        }
    };
}

component_field!(VectorField);
component_field!(OneForm);

impl VectorField {
    /// `X(f) = X^i d_i f`.
    pub fn apply(&self, f: &RationalExpr) -> RationalExpr {
        self.comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| c.mul(&f.diff(self.chart.coord(i))))
            .sum()
    }

    /// `[X, Y]`.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        let comps = (0..self.comps.len()).map(|k| self.apply(&other.comps[k]).sub(&other.apply(&self.comps[k]))).collect();
        VectorField { chart: self.chart.clone(), comps }
    }

    /// `sum w_i x^i d_i` for weights `w`.
    pub fn euler(chart: &Chart, weights: &[RationalExpr]) -> VectorField {
        let comps = chart.coord_exprs().iter().zip(weights).map(|(x, w)| x.mul(w)).collect();
        VectorField { chart: chart.clone(), comps }
    }
}

impl OneForm {
    /// `df`.
    pub fn differential(chart: &Chart, f: &RationalExpr) -> OneForm {
        OneForm { chart: chart.clone(), comps: chart.coords().iter().map(|c| f.diff(c)).collect() }
    }

    /// `a(X)`.
    pub fn eval(&self, x: &VectorField) -> RationalExpr {
        dot(&self.comps, &x.comps)
    }

    /// `(a ^ b)_ij = a_i b_j - a_j b_i`.
    pub fn wedge(&self, other: &OneForm) -> Matrix {
        let n = self.comps.len();
        Matrix::from_fn(n, n, |i, j| self.comps[i].mul(&other.comps[j]).sub(&self.comps[j].mul(&other.comps[i])))
    }

    /// Exterior derivative, `(da)_ij = d_i a_j - d_j a_i`.
    pub fn exterior_derivative(&self) -> Matrix {
        let n = self.comps.len();
        Matrix::from_fn(n, n, |i, j| self.comps[j].diff(self.chart.coord(i)).sub(&self.comps[i].diff(self.chart.coord(j))))
    }
}
