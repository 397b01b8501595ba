use std::cmp::Ordering;
use std::fmt;

use super::{Monomial, Polynomial, Term, WeightedOrder};
use crate::{Error, Result};

/// Element of `C[z] ⊗ C^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorPolynomial {
    components: Vec<Polynomial>,
}

/// Leading term of a vector polynomial: a term sitting in one component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionedTerm {
    pub component: usize,
    pub term: Term,
}

impl VectorPolynomial {
    pub fn new(components: Vec<Polynomial>) -> Result<Self> {
        let first = components.first().ok_or_else(|| Error::InvalidArgument("vector polynomial needs r >= 1".into()))?;
        let dim = first.dim();
        if let Some(c) = components.iter().find(|c| c.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: c.dim() });
        }
        Ok(Self { components })
    }

    pub fn zero(dim: usize, rank: usize) -> Self {
        Self { components: vec![Polynomial::zero(dim); rank.max(1)] }
    }

    pub fn from_scalar(p: Polynomial) -> Self {
        Self { components: vec![p] }
    }

    pub fn into_scalar(mut self) -> Option<Polynomial> {
        (self.components.len() == 1).then(|| self.components.pop().expect("one component"))
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub(crate) fn component_mut(&mut self, i: usize) -> &mut Polynomial {
        &mut self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    fn check_shape(&self, other: &VectorPolynomial) -> Result<()> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: other.rank() });
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &VectorPolynomial) -> Result<VectorPolynomial> {
        self.check_shape(other)?;
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect();
        Ok(Self { components })
    }

    pub fn checked_sub(&self, other: &VectorPolynomial) -> Result<VectorPolynomial> {
        self.check_shape(other)?;
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a - b).collect();
        Ok(Self { components })
    }

    /// `g·self` for a scalar polynomial `g`.
    pub fn mul_poly(&self, g: &Polynomial) -> Result<VectorPolynomial> {
        let components = self.components.iter().map(|c| c.checked_mul(g)).collect::<Result<_>>()?;
        Ok(Self { components })
    }

    pub fn mul_term(&self, t: &Term) -> VectorPolynomial {
        Self { components: self.components.iter().map(|c| c.mul_term(t)).collect() }
    }

    /// Term-over-position: the greatest monomial across components, ties
    /// going to the lowest component index.
    pub fn leading_term(&self, ord: &WeightedOrder) -> Result<PositionedTerm> {
        let mut best: Option<(usize, &Monomial, &super::GaussianRational)> = None;
        for (i, c) in self.components.iter().enumerate() {
            if c.dim() != ord.dim() {
                return Err(Error::DimensionMismatch { expected: c.dim(), found: ord.dim() });
            }
            if let Some((m, a)) = c.leading_entry(ord) {
                let better = match best {
                    None => true,
                    Some((_, bm, _)) => ord.compare(m, bm) == Ordering::Greater,
                };
                if better {
                    best = Some((i, m, a));
                }
            }
        }
        best.map(|(component, m, a)| PositionedTerm { component, term: Term::new(a.clone(), m.clone()) })
            .ok_or(Error::ZeroPolynomial("leading term"))
    }

    pub fn is_quasi_homogeneous(&self, ord: &WeightedOrder) -> bool {
        let mut deg = None;
        for c in &self.components {
            for (m, _) in c.terms() {
                let d = ord.degree(m);
                if *deg.get_or_insert(d) != d {
                    return false;
                }
            }
        }
        deg.is_some()
    }
}

impl PositionedTerm {
    /// Position-aware comparison: monomial first, then lower component wins.
    pub fn compare(&self, other: &PositionedTerm, ord: &WeightedOrder) -> Ordering {
        ord.compare(&self.term.monomial, &other.term.monomial)
            .then_with(|| other.component.cmp(&self.component))
    }

    pub fn divides(&self, other: &PositionedTerm) -> bool {
        self.component == other.component && self.term.divides(&other.term)
    }
}

impl fmt::Display for VectorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}
