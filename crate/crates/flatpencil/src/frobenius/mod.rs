//! Frobenius structures from prepotentials: the WDVV equations, the
//! structure they define, weak F- and F-manifold criteria and the SL(2)
//! action on solutions.

mod integrate;
mod manifold;
mod prepotential;
mod sl2;
mod structure;

pub use integrate::integrate_third_derivatives;
pub(crate) use manifold::proportional;
pub use manifold::{f_manifold_check, lie_derivative_product, nabla_product, theorem_gen_curvature_identity, weak_f_manifold_check};
pub use prepotential::{check_wdvv, Prepotential};
pub use sl2::{sl2_transform, Sl2Transform};
pub use structure::{frobenius_from_prepotential, intersection_form, FrobeniusStructure, IntersectionForm};

use crate::expr::ExprError;
use crate::pencil::PencilError;
use crate::saito::SaitoError;
use crate::tensor::TensorError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FrobeniusError {
    #[error("eta must be constant")]
    NonConstantEta,
    #[error("d^3F/dt1 dt{i} dt{j} = {found}, but eta gives {expected}")]
    EtaMismatch { i: usize, j: usize, found: String, expected: String },
    #[error("WDVV fails: {0}")]
    WdvvFailed(String),
    #[error("the structure has no Euler field")]
    MissingEuler,
    #[error("eta is not the unit anti-diagonal form with unit direction t1")]
    NotAntiDiagonal,
    #[error("cannot integrate within the supported class: {0}")]
    IntegrationUnsupported(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error(transparent)]
    Saito(#[from] SaitoError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}
