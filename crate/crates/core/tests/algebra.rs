mod common;

use std::cmp::Ordering;

use common::{monomial, poly, quasi_homogeneous, weights2};
use num_traits::{One, Zero};
use proptest::prelude::*;
use stabdiv::groebner::{quasi_homogeneous_basis, s_polynomial};
use stabdiv::norms::{c_ratio, poly_norm_sq};
use stabdiv::{
    beurling_form, buchberger, certify, divide, is_member, Monomial, Polynomial, Rational, SpaceParams, WeightedOrder,
};

fn space() -> impl Strategy<Value = SpaceParams> {
    (2usize..=3, prop_oneof![Just((0i64, 1i64)), Just((-1, 1)), Just((1, 2)), Just((3, 1)), Just((-4, 3))]).prop_map(
        |(d, (n, den))| {
            let t = Rational::new(n.into(), den.into()).max(Rational::from_integer((-(d as i64)).into()));
            SpaceParams::new(d, t).unwrap()
        },
    )
}

fn da(d: usize) -> SpaceParams {
    SpaceParams::drury_arveson(d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn order_is_multiplicative(ord in weights2(), a in monomial(2, 5), b in monomial(2, 5), c in monomial(2, 5)) {
        let ab = ord.compare(&a, &b);
        prop_assert_eq!(ord.compare(&a.mul(&c), &b.mul(&c)), ab);
        prop_assert_eq!(ord.compare(&b, &a), ab.reverse());
    }

    #[test]
    fn descending_chains_terminate(ord in weights2(), start in monomial(2, 6), seed in any::<u64>()) {
        // Every strictly smaller monomial has no larger weighted degree, and each
        // weighted degree holds finitely many monomials, so a chain is bounded.
        let bound: usize = (0..=ord.degree(&start)).map(|q| Monomial::all_of_weighted_degree(ord.weights(), q).len()).sum();
        let mut cur = start;
        let mut steps = 0usize;
        let mut s = seed;
        loop {
            let below: Vec<Monomial> = (0..=ord.degree(&cur))
                .flat_map(|q| Monomial::all_of_weighted_degree(ord.weights(), q))
                .filter(|m| ord.compare(m, &cur) == Ordering::Less)
                .collect();
            if below.is_empty() {
                break;
            }
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            cur = below[(s >> 33) as usize % below.len()].clone();
            steps += 1;
            prop_assert!(steps <= bound);
        }
        prop_assert!(cur.is_one());
    }

    #[test]
    fn leading_term_is_multiplicative(ord in weights2(), p in poly(2, 4, 4), q in poly(2, 4, 4)) {
        let lp = p.leading_term(&ord).unwrap();
        let lq = q.leading_term(&ord).unwrap();
        let lpq = (&p * &q).leading_term(&ord).unwrap();
        prop_assert_eq!(lpq.monomial, lp.monomial.mul(&lq.monomial));
        prop_assert_eq!(lpq.coeff, &lp.coeff * &lq.coeff);
    }

    #[test]
    fn quasi_components_partition(ord in weights2(), p in poly(2, 5, 8)) {
        let parts = p.quasi_components(&ord);
        let mut sum = Polynomial::zero(2);
        let mut seen = 0;
        for (q, part) in &parts {
            prop_assert!(part.terms().all(|(m, _)| ord.degree(m) == *q));
            seen += part.len();
            sum = &sum + part;
        }
        prop_assert_eq!(seen, p.len());
        prop_assert_eq!(sum, p);
    }

    #[test]
    fn unit_weights_give_total_degree(m in monomial(3, 6), other in monomial(3, 6)) {
        let ord = WeightedOrder::graded(3);
        prop_assert_eq!(ord.degree(&m), m.total_degree());
        if m.total_degree() != other.total_degree() {
            prop_assert_eq!(ord.compare(&m, &other), m.total_degree().cmp(&other.total_degree()));
        } else {
            prop_assert_eq!(ord.compare(&m, &other), m.exponents().cmp(other.exponents()));
        }
    }

    #[test]
    fn c_ratio_in_unit_interval(sp in space(), n in 0u64..200) {
        let c = c_ratio(n, &sp);
        prop_assert!(c > Rational::zero() && c <= Rational::one());
        prop_assert!(c_ratio(n + 1, &sp) <= c);
        if !sp.is_drury_arveson() && n > 0 {
            prop_assert!(c_ratio(n + 1, &sp) < c);
        }
    }

    #[test]
    fn norm_is_additive_on_disjoint_supports(sp in space(), p in poly(3, 3, 5), q in poly(3, 3, 5)) {
        prop_assume!(sp.d() == 3);
        let q: Polynomial = Polynomial::from_terms(3, q.terms().filter(|(m, _)| p.coeff(m).is_zero()).map(|(m, c)| (c.clone(), m.clone()))).unwrap();
        let sum = poly_norm_sq(&(&p + &q), &sp).unwrap();
        prop_assert_eq!(sum, poly_norm_sq(&p, &sp).unwrap() + poly_norm_sq(&q, &sp).unwrap());
    }

    #[test]
    fn homogeneous_norm_scales_by_c(sp in space(), f in poly(3, 4, 6)) {
        prop_assume!(sp.d() == 3);
        for (n, part) in f.homogeneous_components() {
            let lhs = poly_norm_sq(&part, &sp).unwrap();
            prop_assert_eq!(lhs, c_ratio(n, &sp) * poly_norm_sq(&part, &da(3)).unwrap());
        }
        prop_assert!(poly_norm_sq(&f, &sp).unwrap() <= poly_norm_sq(&f, &da(3)).unwrap());
    }

    #[test]
    fn division_preserves_quasi_homogeneity(
        (ord, h, gens) in weights2().prop_flat_map(|ord| {
            let g = proptest::collection::vec((1u64..4).prop_flat_map({ let o = ord.clone(); move |q| quasi_homogeneous(&o, q, 3) }), 1..4);
            (Just(ord.clone()), (4u64..9).prop_flat_map({ let o = ord.clone(); move |q| quasi_homogeneous(&o, q, 5) }), g)
        })
    ) {
        let res = match divide(&h, &gens, &ord) {
            Ok(r) => r,
            Err(stabdiv::Error::DuplicateLeadingTerm { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let q = h.quasi_degree(&ord).unwrap();
        for prod in res.products(&gens) {
            if !prod.is_zero() {
                prop_assert_eq!(prod.quasi_degree(&ord), Some(q));
            }
        }
        if !res.remainder.is_zero() {
            prop_assert_eq!(res.remainder.quasi_degree(&ord), Some(q));
        }
        prop_assert_eq!(res.reconstruct(&gens), h.clone());
        prop_assert_eq!(divide(&h, &gens, &ord).unwrap(), res);
    }

    #[test]
    fn division_is_linear_in_h(
        (ord, h1, h2, gens) in weights2().prop_flat_map(|ord| {
            let g = proptest::collection::vec((1u64..4).prop_flat_map({ let o = ord.clone(); move |q| quasi_homogeneous(&o, q, 3) }), 1..4);
            (4u64..9).prop_flat_map(move |q| (Just(ord.clone()), quasi_homogeneous(&ord, q, 4), quasi_homogeneous(&ord, q, 4), g.clone()))
        })
    ) {
        let (r1, r2) = match (divide(&h1, &gens, &ord), divide(&h2, &gens, &ord)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return Ok(()),
        };
        let sum = &h1 + &h2;
        prop_assume!(!sum.is_zero());
        let r = divide(&sum, &gens, &ord).unwrap();
        for i in 0..gens.len() {
            prop_assert_eq!(&r.quotients[i], &(&r1.quotients[i] + &r2.quotients[i]));
        }
        prop_assert_eq!(r.remainder, &r1.remainder + &r2.remainder);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn buchberger_output_is_groebner(ord in weights2(), gens in proptest::collection::vec(poly(2, 4, 3), 1..=3)) {
        let gb = buchberger(&gens, &ord).unwrap();
        let g = gb.generators();
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                let s = s_polynomial(&g[i], &g[j], &ord).unwrap();
                prop_assert!(divide(&s, g, &ord).unwrap().remainder.is_zero());
            }
        }
        for f in &gens {
            prop_assert!(is_member(f, &gb).unwrap());
        }
        let red = gb.reduce();
        prop_assert!(red.verify().unwrap());
        let lts = red.leading_monomials();
        for (i, p) in red.generators().iter().enumerate() {
            prop_assert!(p.leading_term(&ord).unwrap().coeff.is_one());
            for (m, _) in p.terms() {
                prop_assert!(lts.iter().enumerate().all(|(j, lt)| j == i || !lt.divides(m)));
            }
        }
    }

    #[test]
    fn quasi_homogeneous_basis_stays_single_degree(
        (ord, gens) in weights2().prop_flat_map(|ord| {
            let g = proptest::collection::vec((1u64..6).prop_flat_map({ let o = ord.clone(); move |q| quasi_homogeneous(&o, q, 3) }), 1..4);
            (Just(ord), g)
        })
    ) {
        let gb = quasi_homogeneous_basis(&gens, &ord).unwrap();
        for g in gb.generators() {
            prop_assert_eq!(g.quasi_components(&ord).len(), 1);
        }
    }

    #[test]
    fn beurling_consistency(p in poly(2, 2, 2), a in 1u32..4, b in 1u32..4, extra in poly(2, 3, 2), j in poly(2, 2, 2)) {
        prop_assume!(p.total_degree().unwrap() > 0);
        let ord = WeightedOrder::graded(2);
        let cof = [
            Polynomial::monomial(Monomial::new(vec![a, 0])),
            Polynomial::monomial(Monomial::new(vec![0, b])),
            extra,
        ];
        let gens: Vec<Polynomial> = cof.iter().map(|c| &p * c).collect();
        let bf = beurling_form(&gens, &ord).unwrap();
        for (c, g) in bf.cofactor_ideal.iter().zip(&gens) {
            prop_assert_eq!(&(c * &bf.gcd_part), g);
        }
        prop_assert!(matches!(bf.codimension, stabdiv::Codimension::Finite(_)));
        let gb = buchberger(&gens, &ord).unwrap();
        let in_j = &(&j * &cof[0]) + &cof[1];
        prop_assert!(is_member(&(&bf.gcd_part * &in_j), &gb).unwrap());
    }
}

#[test]
fn groebner_slices_divide_exactly() {
    let ord = WeightedOrder::graded(2);
    let gens: Vec<Polynomial> =
        ["x^2+y^2", "x*y", "y^3"].iter().map(|s| stabdiv::poly::parse_polynomial(s, 2).unwrap()).collect();
    let gb = quasi_homogeneous_basis(&gens, &ord).unwrap();
    let lifted = stabdiv::groebner::equalized_basis(&gb, 3).unwrap();
    let report = certify(&lifted, &ord, &da(2), 12, 10, 4).unwrap();
    assert!(report.records.iter().all(|r| r.max_remainder_norm_sq.is_zero()));
    let sup = report.records.iter().map(|r| r.max_ratio_sq.clone()).max().unwrap();
    assert_eq!(sup, report.sup_ratio_sq);
}
