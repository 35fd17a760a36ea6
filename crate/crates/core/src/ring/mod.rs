//! Monomial ideals of `k[x_1, ..., x_d]` localized at `(x_1, ..., x_d)`.
//!
//! Every ideal is stored by its minimal generators, which form an antichain
//! under componentwise `<=`. The empty generator list is the zero ideal and
//! the single zero exponent is the unit ideal. Lengths do not depend on the
//! coefficient field, so no field is modelled.

mod exponent;
mod ideal;
mod length;
mod syntax;

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use exponent::Exponent;
pub use ideal::{minimalize, Combine, MonomialIdeal};
pub use length::{colength, quotient_length, quotient_length_by_enumeration, Length};

use crate::{Error, Result};

/// The ambient ring: its dimension and the variable names used for I/O.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingContext {
    names: Vec<String>,
}

impl RingContext {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Arc<Self>> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidArgument("a ring needs at least one variable".into()));
        }
        let mut seen = HashSet::new();
        for n in &names {
            let valid = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid || n == "n" {
                return Err(Error::InvalidArgument(format!("invalid variable name `{n}`")));
            }
            if !seen.insert(n.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate variable name `{n}`")));
            }
        }
        Ok(Arc::new(Self { names }))
    }

    /// Context with default names: `x, y, z, w` for `d <= 4`, else `x1..xd`.
    pub fn with_dimension(d: usize) -> Result<Arc<Self>> {
        const SHORT: [&str; 4] = ["x", "y", "z", "w"];
        if d <= SHORT.len() {
            Self::new(SHORT[..d].iter().copied())
        } else {
            Self::new((1..=d).map(|i| format!("x{i}")))
        }
    }

    pub fn dimension(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Context on the given subset of variables, in ascending index order.
    pub fn restrict(&self, vars: &[usize]) -> Result<Arc<Self>> {
        Self::new(vars.iter().map(|&i| self.names[i].clone()))
    }

    pub fn check(&self, e: &Exponent) -> Result<()> {
        if e.dim() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), found: e.dim() });
        }
        Ok(())
    }

    pub fn format_monomial(&self, e: &Exponent) -> String {
        syntax::format_monomial(&self.names, e)
    }

    pub fn parse_monomial(&self, s: &str) -> Result<Exponent> {
        syntax::parse_monomial(self, s)
    }

    pub fn parse_ideal(self: &Arc<Self>, s: &str) -> Result<MonomialIdeal> {
        syntax::parse_ideal(self, s)
    }

    /// Sorted, deduplicated variable indices for a list of names.
    pub fn variable_set(&self, names: &[impl AsRef<str>]) -> Result<Vec<usize>> {
        let mut idx = names.iter().map(|n| self.index_of(n.as_ref())).collect::<Result<Vec<_>>>()?;
        idx.sort_unstable();
        idx.dedup();
        if idx.is_empty() {
            return Err(Error::EmptyVariableSet);
        }
        Ok(idx)
    }
}
