//! Exact computer algebra: rationals, sparse polynomials over opaque atoms,
//! canonical rational functions, parsing, printing and rewrite rules.

mod atom;
mod gcd;
mod parse;
mod poly;
mod print;
mod rational;
mod rewrite;
mod rexpr;

use std::collections::BTreeMap;

pub use atom::{Atom, FuncAtom};
pub use gcd::gcd;
pub use parse::Symbols;
pub use poly::{Exps, Poly};
pub use print::{print, print_poly};
pub use rational::{ParseRationalError, Rational};
pub use rewrite::{RewriteRule, RuleSet};
pub use rexpr::RationalExpr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("denominator is identically zero")]
    ZeroDenominator,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown symbol `{name}` at offset {offset}")]
    UnknownSymbol { name: String, offset: usize },
    #[error("rewrite rule for `{0}` does not decrease any argument ordering")]
    NonTerminatingRule(String),
    #[error("invalid rewrite rule: {0}")]
    InvalidRule(String),
}

/// Canonical form after exhaustive rule application.
pub fn normalize(e: &RationalExpr, rules: &RuleSet) -> Result<RationalExpr, ExprError> {
    rules.apply(e)
}

/// Builds `num/den` in canonical form.
pub fn quotient(num: &RationalExpr, den: &RationalExpr) -> Result<RationalExpr, ExprError> {
    num.checked_div(den)
}

pub fn differentiate(e: &RationalExpr, var: &str, symbols: &Symbols) -> Result<RationalExpr, ExprError> {
    if !symbols.has_var(var) {
        return Err(ExprError::UnknownVariable(var.to_string()));
    }
    Ok(e.diff(var))
}

pub fn substitute(e: &RationalExpr, bindings: &BTreeMap<String, RationalExpr>, symbols: &Symbols) -> Result<RationalExpr, ExprError> {
    if let Some(v) = bindings.keys().find(|v| !symbols.has_var(v)) {
        return Err(ExprError::UnknownVariable(v.clone()));
    }
    e.substitute(bindings)
}

pub fn parse(text: &str, symbols: &Symbols) -> Result<RationalExpr, ExprError> {
    symbols.parse(text)
}

#[cfg(test)]
pub(crate) fn parse_poly_for_tests(s: &str) -> Poly {
    let e = Symbols::open().parse(s).unwrap();
    assert!(e.is_polynomial());
    e.numer().clone()
}
