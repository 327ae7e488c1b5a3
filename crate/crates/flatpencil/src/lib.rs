//! Exact symbolic verification of pencils of metrics.
//!
//! The crate is layered: [`expr`] is a small computer-algebra kernel,
//! [`tensor`] does coordinate tensor calculus on top of it, and the remaining
//! modules turn statements about pencils, Frobenius structures and Coxeter
//! orbit spaces into identities that are checked exactly. [`jet`] evaluates
//! the same quantities pointwise with truncated Taylor arithmetic, as an
//! independent oracle.

pub mod conformal;
pub mod expr;
pub mod frobenius;
pub mod jet;
pub mod pencil;
pub mod report;
pub mod saito;
pub mod tensor;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/expressions.md")]
    mod expressions {}
    #[doc = include_str!("../../../book/src/tensors.md")]
    mod tensors {}
    #[doc = include_str!("../../../book/src/pencils.md")]
    mod pencils {}
    #[doc = include_str!("../../../book/src/frobenius.md")]
    mod frobenius {}
    #[doc = include_str!("../../../book/src/saito.md")]
    mod saito {}
    #[doc = include_str!("../../../book/src/jet.md")]
    mod jet {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
