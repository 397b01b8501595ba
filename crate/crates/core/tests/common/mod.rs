#![allow(dead_code)]

use proptest::prelude::*;
use stabdiv::{GaussianRational, Monomial, Polynomial, Rational, WeightedOrder};

pub fn gauss(re: i64, im: i64) -> GaussianRational {
    GaussianRational::new(Rational::from_integer(re.into()), Rational::from_integer(im.into()))
}

pub fn monomial(dim: usize, max_exp: u32) -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(0..=max_exp, dim).prop_map(Monomial::new)
}

/// Nonzero polynomial with small Gaussian-integer coefficients.
pub fn poly(dim: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    let term = ((-5i64..=5), (-2i64..=2), monomial(dim, max_exp));
    proptest::collection::vec(term, 1..=max_terms)
        .prop_map(move |ts| Polynomial::from_terms(dim, ts.into_iter().map(|(re, im, m)| (gauss(re, im), m))).unwrap())
        .prop_filter("nonzero", |p| !p.is_zero())
}

pub fn weights2() -> impl Strategy<Value = WeightedOrder> {
    prop_oneof![Just(vec![1u32, 1]), Just(vec![2, 1]), Just(vec![1, 2]), Just(vec![3, 2])]
        .prop_map(|w| WeightedOrder::new(w).unwrap())
}

/// Nonzero `ord`-quasi-homogeneous polynomial of the least reachable weighted
/// degree `≥ q`.
pub fn quasi_homogeneous(ord: &WeightedOrder, q: u64, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    let monos = (q..).map(|q| Monomial::all_of_weighted_degree(ord.weights(), q)).find(|m| !m.is_empty()).unwrap();
    let dim = ord.dim();
    let n = monos.len();
    proptest::collection::vec(((-5i64..=5), (-2i64..=2), 0..n), 1..=max_terms)
        .prop_map(move |ts| {
            Polynomial::from_terms(dim, ts.into_iter().map(|(re, im, i)| (gauss(re, im), monos[i].clone()))).unwrap()
        })
        .prop_filter("nonzero", |p| !p.is_zero())
}
