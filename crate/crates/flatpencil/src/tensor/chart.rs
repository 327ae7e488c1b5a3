use std::fmt;
use std::sync::Arc;

use super::TensorError;
use crate::expr::{RationalExpr, Symbols};

/// An ordered list of coordinate names. Every field is anchored to one chart.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chart {
    name: Arc<str>,
    coords: Arc<[String]>,
}

impl Chart {
    pub fn new<S: AsRef<str>>(name: &str, coords: &[S]) -> Result<Chart, TensorError> {
        if coords.is_empty() {
            return Err(TensorError::EmptyChart);
        }
        let coords: Vec<String> = coords.iter().map(|c| c.as_ref().to_string()).collect();
        for (i, c) in coords.iter().enumerate() {
            if coords[..i].contains(c) {
                return Err(TensorError::DuplicateCoordinate(c.clone()));
            }
        }
        Ok(Chart { name: Arc::from(name), coords: coords.into() })
    }

    /// `prefix1, ..., prefixn`.
    pub fn numbered(name: &str, prefix: &str, n: usize) -> Chart {
        let coords: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        Chart::new(name, &coords).expect("numbered coordinates are distinct")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &str {
        &self.coords[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }

    /// The coordinate functions as expressions.
    pub fn coord_exprs(&self) -> Vec<RationalExpr> {
        self.coords.iter().map(|c| RationalExpr::var(c)).collect()
    }

    pub fn symbols(&self) -> Symbols {
        Symbols::with_vars(&self.coords)
    }

    /// True when `e` does not depend on any coordinate.
    pub fn is_constant(&self, e: &RationalExpr) -> bool {
        e.is_free_of(&self.coords)
    }

    pub(crate) fn same(&self, other: &Chart) -> Result<(), TensorError> {
        if self == other {
            Ok(())
        } else {
            Err(TensorError::ChartMismatch(self.name.to_string(), other.name.to_string()))
        }
    }
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name, self.coords.join(", "))
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
