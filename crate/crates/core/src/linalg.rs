//! Exact linear algebra on polynomials viewed as coefficient vectors.

use std::collections::BTreeMap;

use crate::poly::{Monomial, Polynomial, Term};

/// Row-echelon basis of a subspace of `Q(i)[z]`, pivoting on the greatest
/// stored monomial of each row.
#[derive(Clone, Debug, Default)]
pub struct ExactSpan {
    rows: BTreeMap<Monomial, Polynomial>,
}

impl ExactSpan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `p` against the rows; the result is zero iff `p` lies in
    /// the span.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        let mut r = p.clone();
        let mut out = Polynomial::zero(p.dim());
        while let Some((m, c)) = r.last_stored() {
            let (m, c) = (m.clone(), c.clone());
            match self.rows.get(&m) {
                Some(row) => r.sub_term_multiple(&Term::new(c, Monomial::one(p.dim())), row),
                None => {
                    r.remove(&m);
                    out.add_term(c, m);
                }
            }
        }
        out
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }

    /// Adds `p`; returns false when it was already in the span.
    pub fn insert(&mut self, p: &Polynomial) -> bool {
        let r = self.reduce(p);
        let Some((m, c)) = r.last_stored() else { return false };
        let m = m.clone();
        let r = r.scale(&c.inv().expect("nonzero pivot"));
        self.rows.insert(m, r);
        true
    }
}

/// Dimension of the span of `polys`.
pub fn rank(polys: &[Polynomial]) -> usize {
    let mut s = ExactSpan::new();
    polys.iter().filter(|p| s.insert(p)).count()
}
