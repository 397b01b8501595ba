use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::Monomial;
use crate::{Error, Result};

/// Weighted-degree monomial order.
///
/// Monomials are compared first by `α·n`; ties are broken lexicographically
/// along `precedence`, where a larger exponent on an earlier variable wins.
/// With two variables and the default precedence this is exactly the rule
/// `(k n_1 + l n_2 < m n_1 + n n_2)` or equal with `k < m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightedOrder {
    weights: Vec<u32>,
    precedence: Vec<usize>,
}

impl WeightedOrder {
    pub fn new(weights: Vec<u32>) -> Result<Self> {
        let precedence = (0..weights.len()).collect();
        Self::with_precedence(weights, precedence)
    }

    pub fn with_precedence(weights: Vec<u32>, precedence: Vec<usize>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidOrder("no variables".into()));
        }
        if let Some(i) = weights.iter().position(|&w| w == 0) {
            return Err(Error::InvalidOrder(format!("weight n_{} must be positive", i + 1)));
        }
        let mut seen = vec![false; weights.len()];
        if precedence.len() != weights.len() {
            return Err(Error::InvalidOrder("precedence is not a permutation".into()));
        }
        for &p in &precedence {
            if p >= weights.len() || seen[p] {
                return Err(Error::InvalidOrder("precedence is not a permutation".into()));
            }
            seen[p] = true;
        }
        Ok(Self { weights, precedence })
    }

    /// Graded lexicographic order, `n = (1, …, 1)`.
    pub fn graded(dim: usize) -> Self {
        Self::new(vec![1; dim]).expect("dim > 0")
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }

    pub fn is_graded(&self) -> bool {
        self.weights.iter().all(|&w| w == 1)
    }

    pub fn degree(&self, m: &Monomial) -> u64 {
        m.weighted_degree(&self.weights)
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.degree(a).cmp(&self.degree(b)).then_with(|| {
            self.precedence
                .iter()
                .map(|&v| a.exponents()[v].cmp(&b.exponents()[v]))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }

    pub fn try_compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        a.check_dim(self.dim())?;
        b.check_dim(self.dim())?;
        Ok(self.compare(a, b))
    }
}
