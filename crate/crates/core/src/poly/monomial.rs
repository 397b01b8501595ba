use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Exponent vector `α` of the monomial `z^α`.
///
/// The derived `Ord` is plain lexicographic order on the exponent vector and
/// is only used for canonical storage; use [`WeightedOrder`](super::WeightedOrder)
/// for any algebraic reasoning.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn one(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    /// The variable `z_{index+1}` (zero-based index).
    pub fn var(dim: usize, index: usize) -> Self {
        let mut e = vec![0; dim];
        e[index] = 1;
        Self(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> u64 {
        self.0.iter().zip(weights).map(|(&e, &w)| e as u64 * w as u64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.dim(), other.dim());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self | other`, componentwise `≤`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self` if `self | other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other)
            .then(|| Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// `α! = Π α_i!`.
    pub fn factorial(&self) -> BigUint {
        self.0.iter().fold(BigUint::one(), |acc, &e| acc * factorial(e as u64))
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: self.dim() });
        }
        Ok(())
    }

    /// All monomials in `dim` variables of total degree exactly `degree`,
    /// in lexicographic order of the exponent vector (highest first).
    pub fn all_of_total_degree(dim: usize, degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; dim];
        fill_total(&mut out, &mut cur, 0, degree);
        out
    }

    /// All `β` with `β·weights = target`.
    pub fn all_of_weighted_degree(weights: &[u32], target: u64) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; weights.len()];
        fill_weighted(&mut out, &mut cur, weights, 0, target);
        out
    }
}

fn fill_total(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, pos: usize, remaining: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(Monomial(cur.clone()));
        return;
    }
    if cur.is_empty() {
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e;
        fill_total(out, cur, pos + 1, remaining - e);
    }
    cur[pos] = 0;
}

fn fill_weighted(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, weights: &[u32], pos: usize, remaining: u64) {
    if pos == cur.len() {
        if remaining == 0 {
            out.push(Monomial(cur.clone()));
        }
        return;
    }
    let w = weights[pos] as u64;
    for e in (0..=remaining / w).rev() {
        cur[pos] = e as u32;
        fill_weighted(out, cur, weights, pos + 1, remaining - e * w);
    }
    cur[pos] = 0;
}

pub(crate) fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub(crate) fn variable_name(dim: usize, index: usize) -> String {
    if dim == 2 {
        ["x", "y"][index].to_string()
    } else {
        format!("z{}", index + 1)
    }
}

/// Prints `x^2*y` for two variables and `z1^2*z3` otherwise; `1` for the
/// constant monomial.
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(&variable_name(self.dim(), i))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}
