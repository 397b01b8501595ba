use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{GaussianRational, Monomial, WeightedOrder};
use crate::{Error, Result};

/// A single term `c·z^α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: GaussianRational,
    pub monomial: Monomial,
}

impl Term {
    pub fn new(coeff: GaussianRational, monomial: Monomial) -> Self {
        Self { coeff, monomial }
    }

    /// `self` divides `other` when the exponents are componentwise `≤`.
    pub fn divides(&self, other: &Term) -> bool {
        !self.coeff.is_zero() && self.monomial.divides(&other.monomial)
    }

    /// `other / self = (b/a)·z^(β−α)`.
    pub fn quotient_of(&self, other: &Term) -> Result<Term> {
        let monomial = self.monomial.quotient_of(&other.monomial).ok_or(Error::NotDivisible)?;
        let coeff = other.coeff.checked_div(&self.coeff).ok_or(Error::NotDivisible)?;
        Ok(Term { coeff, monomial })
    }
}

/// Sparse polynomial in `dim` variables over `Q(i)`.
///
/// Terms are keyed by monomial; no stored coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, GaussianRational::one())
    }

    pub fn constant(dim: usize, c: GaussianRational) -> Self {
        Self::from_term(dim, Term::new(c, Monomial::one(dim)))
    }

    pub fn var(dim: usize, index: usize) -> Self {
        Self::monomial(Monomial::var(dim, index))
    }

    pub fn monomial(m: Monomial) -> Self {
        let dim = m.dim();
        Self::from_term(dim, Term::new(GaussianRational::one(), m))
    }

    pub fn from_term(dim: usize, t: Term) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(t.coeff, t.monomial);
        p
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs, merging
    /// repeated monomials.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (GaussianRational, Monomial)>,
    {
        let mut p = Self::zero(dim);
        for (c, m) in terms {
            m.check_dim(dim)?;
            p.add_term(c, m);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub(crate) fn add_term(&mut self, c: GaussianRational, m: Monomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_same_dim(&self, other: &Polynomial) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(c.clone(), m.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(-c, m.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same_dim(other)?;
        let mut out = Polynomial::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ca * cb, ma.mul(mb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussianRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, t: &Term) -> Polynomial {
        if t.coeff.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, a)| (m.mul(&t.monomial), a * &t.coeff)).collect(),
        }
    }

    /// `self -= t·f`, in place.
    pub(crate) fn sub_term_multiple(&mut self, t: &Term, f: &Polynomial) {
        for (m, a) in &f.terms {
            self.add_term(-(a * &t.coeff), m.mul(&t.monomial));
        }
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    pub fn min_total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::total_degree).min()
    }

    pub fn weighted_degree(&self, ord: &WeightedOrder) -> Result<u64> {
        self.check_order(ord)?;
        self.terms.keys().map(|m| ord.degree(m)).max().ok_or(Error::ZeroPolynomial("weighted degree"))
    }

    /// `Some(m)` when every term has weighted degree `m`.
    pub fn quasi_degree(&self, ord: &WeightedOrder) -> Option<u64> {
        let mut degs = self.terms.keys().map(|m| ord.degree(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_quasi_homogeneous(&self, ord: &WeightedOrder) -> bool {
        self.quasi_degree(ord).is_some()
    }

    /// Splits into `n`-quasi-homogeneous parts keyed by weighted degree.
    pub fn quasi_components(&self, ord: &WeightedOrder) -> BTreeMap<u64, Polynomial> {
        let mut out: BTreeMap<u64, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(ord.degree(m))
                .or_insert_with(|| Polynomial::zero(self.dim))
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// Homogeneous parts keyed by total degree.
    pub fn homogeneous_components(&self) -> BTreeMap<u64, Polynomial> {
        self.quasi_components(&WeightedOrder::graded(self.dim))
    }

    pub fn leading_term(&self, ord: &WeightedOrder) -> Result<Term> {
        self.check_order(ord)?;
        self.leading_entry(ord)
            .map(|(m, c)| Term::new(c.clone(), m.clone()))
            .ok_or(Error::ZeroPolynomial("leading term"))
    }

    pub(crate) fn leading_entry(&self, ord: &WeightedOrder) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().max_by(|a, b| ord.compare(a.0, b.0))
    }

    pub fn leading_monomial(&self, ord: &WeightedOrder) -> Option<&Monomial> {
        self.leading_entry(ord).map(|(m, _)| m)
    }

    /// Terms sorted from greatest to least under `ord`.
    pub fn sorted_terms(&self, ord: &WeightedOrder) -> Vec<(&Monomial, &GaussianRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| ord.compare(b.0, a.0));
        v
    }

    /// Scales so that the leading coefficient is 1.
    pub fn monic(&self, ord: &WeightedOrder) -> Result<Polynomial> {
        let lt = self.leading_term(ord)?;
        Ok(self.scale(&lt.coeff.inv().expect("nonzero leading coefficient")))
    }

    fn check_order(&self, ord: &WeightedOrder) -> Result<()> {
        if ord.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: ord.dim() });
        }
        Ok(())
    }

    /// Greatest monomial in storage (lex) order; a fixed pivot choice for
    /// exact echelon forms.
    pub(crate) fn last_stored(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.last_key_value()
    }

    pub(crate) fn remove(&mut self, m: &Monomial) -> Option<GaussianRational> {
        self.terms.remove(m)
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    /// Panics on dimension mismatch; see [`Polynomial::checked_add`].
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial dimensions differ")
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial dimensions differ")
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial dimensions differ")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-GaussianRational::one())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::parse::format_polynomial(self, &WeightedOrder::graded(self.dim)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_polynomial;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, 2).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(&p("x + y") + &p("-x"), p("y"));
        assert_eq!(&p("x^2 - 3*y") + &Polynomial::zero(2), p("x^2 - 3*y"));
        assert_eq!(&p("1/2*x^2") + &p("1/2*x^2"), p("x^2"));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&p("x") * &p("y"), p("x*y"));
        assert_eq!(&p("x+y") * &p("x-y"), p("x^2-y^2"));
        assert_eq!(&p("x^2 + (1+i)*y") * &Polynomial::one(2), p("x^2 + (1+i)*y"));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let q = parse_polynomial("z1 + z3", 3).unwrap();
        assert!(matches!(p("x").checked_add(&q), Err(Error::DimensionMismatch { .. })));
        assert!(p("x").checked_mul(&q).is_err());
    }

    #[test]
    fn weighted_degree_examples() {
        let g = WeightedOrder::graded(2);
        let w = WeightedOrder::new(vec![2, 1]).unwrap();
        assert_eq!(p("x^2*y").weighted_degree(&g).unwrap(), 3);
        assert_eq!(p("x^2*y").weighted_degree(&w).unwrap(), 5);
        assert_eq!(p("x + y^2").weighted_degree(&w).unwrap(), 2);
        assert!(Polynomial::zero(2).weighted_degree(&g).is_err());
    }

    #[test]
    fn quasi_components_examples() {
        let w = WeightedOrder::new(vec![2, 1]).unwrap();
        let parts = p("x + y").quasi_components(&w);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&2], p("x"));
        assert_eq!(parts[&1], p("y"));
        assert_eq!(p("x + y^2").quasi_components(&w).len(), 1);
        assert!(Polynomial::zero(2).quasi_components(&w).is_empty());
    }

    #[test]
    fn leading_term_examples() {
        let g = WeightedOrder::graded(2);
        let w = WeightedOrder::new(vec![2, 1]).unwrap();
        let lt = p("x^2 + x*y").leading_term(&g).unwrap();
        assert_eq!(lt, Term::new(GaussianRational::one(), Monomial::new(vec![2, 0])));
        let lt = p("3*y").leading_term(&g).unwrap();
        assert_eq!(lt, Term::new(GaussianRational::from_int(3), Monomial::new(vec![0, 1])));
        let lt = p("x + y^2").leading_term(&w).unwrap();
        assert_eq!(lt.monomial, Monomial::new(vec![1, 0]));
        assert!(Polynomial::zero(2).leading_term(&g).is_err());
    }

    #[test]
    fn term_division() {
        let a = Term::new(GaussianRational::one(), Monomial::new(vec![1, 1]));
        let b = Term::new(GaussianRational::from_int(2), Monomial::new(vec![2, 1]));
        assert!(a.divides(&b));
        assert_eq!(a.quotient_of(&b).unwrap(), Term::new(GaussianRational::from_int(2), Monomial::new(vec![1, 0])));
        let x = Term::new(GaussianRational::one(), Monomial::new(vec![1, 0]));
        assert!(x.divides(&x));
        assert_eq!(x.quotient_of(&x).unwrap(), Term::new(GaussianRational::one(), Monomial::one(2)));
        let x2 = Term::new(GaussianRational::one(), Monomial::new(vec![2, 0]));
        assert!(!a.divides(&x2));
        assert_eq!(a.quotient_of(&x2), Err(Error::NotDivisible));
    }
}
