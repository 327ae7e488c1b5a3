//! Coxeter orbit spaces: the catalog of invariant bases, the pushforward of
//! the Euclidean metric, the Saito pencil and its conformal modification,
//! flat coordinates and the regularity locus.

mod catalog;
mod flat;
mod pencil;
mod pushforward;

pub use catalog::{Catalog, CoxeterDatum};
pub use flat::{flat_coordinate_map, modified_flat_coordinates, FlatCoordinates, Unimodular};
pub use pencil::{
    modified_saito, modified_saito_with, regularity_locus, rewrite, saito_pencil, saito_prepotential, ModifiedChecks, ModifiedSaito,
    RegularityLocus, SaitoPencil,
};
pub use pushforward::{in_x, invariant_chart, pushforward_in_x, pushforward_metric, round_trip};

use crate::conformal::ConformalError;
use crate::expr::ExprError;
use crate::pencil::PencilError;
use crate::tensor::TensorError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SaitoError {
    #[error("ad - bc = {0}, expected 1")]
    DeterminantNotOne(String),
    #[error("expected dimension {0}, found {1}")]
    DimensionMismatch(usize, usize),
    #[error("unknown group `{0}`; available: {1}")]
    UnknownGroup(String, String),
    #[error("catalog line {0}: {1}")]
    Catalog(usize, String),
    #[error("invalid Coxeter datum {0}: {1}")]
    InvalidDatum(String, String),
    #[error("rewrite failed: {0}")]
    RewriteFailed(String),
    #[error("{0} is not a Saito basis up to scaling: {1}")]
    NormalizationFailed(String, String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("Frobenius structure: {0}")]
    Frobenius(String),
    #[error(transparent)]
    Conformal(#[from] ConformalError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}
