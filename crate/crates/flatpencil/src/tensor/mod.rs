//! Coordinate tensor calculus over [`RationalExpr`](crate::expr::RationalExpr):
//! metrics, Levi-Civita connections, curvature, Lie derivatives and
//! conformal rescaling.
//!
//! Curvature follows `R(X, Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y]`,
//! under which the round metric has positive sectional curvature.

mod chart;
mod conformal;
mod connection;
mod curvature;
mod field;
mod lie;
mod matrix;

pub use chart::Chart;
pub use conformal::{conformal_rescale, scaled_connection_difference};
pub use connection::{christoffel, covariant_derivative_oneform, nabla_endomorphism_e, ConnectionField};
pub use curvature::{constant_sectional_curvature, riemann, sectional_constant, CurvatureField, LoweredCurvature};
pub use field::{MetricField, OneForm, Variance, VectorField};
pub use lie::{
    conformal_factor, lie_derivative_christoffel, lie_derivative_connection, lie_derivative_inverse_metric, lie_derivative_metric,
    lie_derivative_upper, proportionality,
};
pub use matrix::Matrix;

use crate::expr::ExprError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TensorError {
    #[error("chart has no coordinates")]
    EmptyChart,
    #[error("coordinate `{0}` appears twice")]
    DuplicateCoordinate(String),
    #[error("expected {expected} components, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("fields live on different charts ({0} and {1})")]
    ChartMismatch(String, String),
    #[error("metric is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("metric determinant vanishes identically")]
    SingularMetric,
    #[error("connection has torsion at G^{0}_{1}{2}")]
    Torsion(usize, usize, usize),
    #[error("conformal factor vanishes identically")]
    ZeroConformalFactor,
    #[error("vector field is not conformal for the metric")]
    NotConformal,
    #[error(transparent)]
    Expr(#[from] ExprError),
}
