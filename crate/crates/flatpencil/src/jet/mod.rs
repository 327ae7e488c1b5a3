//! Second-order jets over exact rationals, used as an oracle for the
//! symbolic tensor calculus.
//!
//! ```
//! use flatpencil::expr::{Rational, Symbols};
//! use flatpencil::jet::{jet_eval, FunctionSamples, Point};
//! use flatpencil::tensor::Chart;
//!
//! let chart = Chart::new("x", &["x"]).unwrap();
//! let e = Symbols::with_vars(&["x"]).parse("x^2").unwrap();
//! let p = Point::new(&chart, vec![Rational::from(3)]).unwrap();
//! let j = jet_eval(&e, &p, &FunctionSamples::new()).unwrap();
//! assert_eq!(j.to_string(), "(9, [6], [[2]])");
//! ```

mod eval;
mod jet2;
mod oracle;

pub use eval::{eval_at, jet_eval, small_rational, FunctionSamples, Point};
pub use jet2::Jet2;
pub use oracle::{metric_jets, metric_parameters, oracle_agreement, oracle_curvature, random_points, OracleCurvature};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JetError {
    #[error("pole at the evaluation point: {0}")]
    PoleAtPoint(String),
    #[error("no sample for {0}")]
    MissingFunctionSample(String),
    #[error("variable `{0}` has no value at the point")]
    UnboundVariable(String),
    #[error("metric is singular at the evaluation point")]
    SingularAtPoint,
    #[error("expected {expected} components, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}
