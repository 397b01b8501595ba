//! Multivariate division with remainder under a weighted order.
//!
//! Generators are sorted so that `LT(f_1) > LT(f_2) > … > LT(f_k)`, and when
//! several leading terms divide the current leading term the one with the
//! largest index (the smallest leading term) is used. Results are reported in
//! the caller's original generator order.

use std::fmt::Write as _;

use serde::Serialize;

use crate::norms::NormTable;
use crate::poly::{factorial, Polynomial, PositionedTerm, Term, VectorPolynomial, WeightedOrder};
use crate::{Error, Rational, Result, SpaceParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepKind {
    /// The leading term was divided by generator `generator` (caller's index).
    Divide { generator: usize },
    /// The leading term was not divisible and moved to the remainder.
    ToRemainder,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub kind: StepKind,
    /// Component of the leading term (always 0 for scalar division).
    pub component: usize,
    pub term: Term,
}

/// `h = Σ a_i f_i + r` together with the step trace that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionResult<R> {
    pub quotients: Vec<Polynomial>,
    pub remainder: R,
    pub trace: Vec<Step>,
}

impl<R> DivisionResult<R> {
    /// One line per step, e.g. `divide 2*x^2 by f1` or `remainder y^3`.
    pub fn trace_log(&self) -> String {
        let mut out = String::new();
        for step in &self.trace {
            let term = Polynomial::from_term(step.term.monomial.dim(), step.term.clone());
            match step.kind {
                StepKind::Divide { generator } => {
                    let _ = write!(out, "divide {term}");
                    if step.component > 0 {
                        let _ = write!(out, " [component {}]", step.component + 1);
                    }
                    let _ = writeln!(out, " by f{}", generator + 1);
                }
                StepKind::ToRemainder => {
                    let _ = write!(out, "remainder {term}");
                    if step.component > 0 {
                        let _ = write!(out, " [component {}]", step.component + 1);
                    }
                    out.push('\n');
                }
            }
        }
        out
    }

    /// The trace as JSON records `{kind, generator?, component, term}`.
    pub fn trace_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Record {
            #[serde(flatten)]
            kind: StepKind,
            component: usize,
            term: String,
        }
        let records: Vec<Record> = self
            .trace
            .iter()
            .map(|s| Record {
                kind: s.kind,
                component: s.component,
                term: Polynomial::from_term(s.term.monomial.dim(), s.term.clone()).to_string(),
            })
            .collect();
        serde_json::to_value(records).expect("plain records serialize")
    }
}

impl DivisionResult<Polynomial> {
    /// `a_i f_i` for every generator.
    pub fn products(&self, gens: &[Polynomial]) -> Vec<Polynomial> {
        self.quotients.iter().zip(gens).map(|(a, f)| a * f).collect()
    }

    pub fn reconstruct(&self, gens: &[Polynomial]) -> Polynomial {
        self.products(gens).iter().fold(self.remainder.clone(), |acc, p| &acc + p)
    }
}

impl DivisionResult<VectorPolynomial> {
    pub fn products(&self, gens: &[VectorPolynomial]) -> Vec<VectorPolynomial> {
        self.quotients
            .iter()
            .zip(gens)
            .map(|(a, f)| f.mul_poly(a).expect("shapes checked during division"))
            .collect()
    }

    pub fn reconstruct(&self, gens: &[VectorPolynomial]) -> VectorPolynomial {
        self.products(gens)
            .iter()
            .fold(self.remainder.clone(), |acc, p| acc.checked_add(p).expect("shapes checked during division"))
    }
}

pub fn divide(h: &Polynomial, gens: &[Polynomial], ord: &WeightedOrder) -> Result<DivisionResult<Polynomial>> {
    let hv = VectorPolynomial::from_scalar(h.clone());
    let gv: Vec<_> = gens.iter().cloned().map(VectorPolynomial::from_scalar).collect();
    let res = divide_vector(&hv, &gv, ord)?;
    Ok(DivisionResult {
        quotients: res.quotients,
        remainder: res.remainder.into_scalar().expect("rank one"),
        trace: res.trace,
    })
}

/// Division in `C[z] ⊗ C^r` with term-over-position leading terms; a
/// generator only divides terms in the component of its own leading term.
pub fn divide_vector(
    h: &VectorPolynomial,
    gens: &[VectorPolynomial],
    ord: &WeightedOrder,
) -> Result<DivisionResult<VectorPolynomial>> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    if h.dim() != ord.dim() {
        return Err(Error::DimensionMismatch { expected: ord.dim(), found: h.dim() });
    }
    for g in gens {
        if g.rank() != h.rank() {
            return Err(Error::RankMismatch { expected: h.rank(), found: g.rank() });
        }
        if g.dim() != h.dim() {
            return Err(Error::DimensionMismatch { expected: h.dim(), found: g.dim() });
        }
    }
    let leads = leading_terms(gens, ord)?;
    let sorted = sorted_by_leading_term(&leads, ord)?;

    let mut p = h.clone();
    let mut quotients = vec![Polynomial::zero(h.dim()); gens.len()];
    let mut remainder = VectorPolynomial::zero(h.dim(), h.rank());
    let mut trace = Vec::new();

    while let Ok(lt) = p.leading_term(ord) {
        let divisor = sorted.iter().rev().copied().find(|&i| leads[i].divides(&lt));
        match divisor {
            Some(i) => {
                let q = leads[i].term.quotient_of(&lt.term)?;
                quotients[i].add_term(q.coeff.clone(), q.monomial.clone());
                for (c, f) in gens[i].components().iter().enumerate() {
                    p.component_mut(c).sub_term_multiple(&q, f);
                }
                trace.push(Step { kind: StepKind::Divide { generator: i }, component: lt.component, term: lt.term });
            }
            None => {
                p.component_mut(lt.component).remove(&lt.term.monomial);
                remainder.component_mut(lt.component).add_term(lt.term.coeff.clone(), lt.term.monomial.clone());
                trace.push(Step { kind: StepKind::ToRemainder, component: lt.component, term: lt.term });
            }
        }
    }
    Ok(DivisionResult { quotients, remainder, trace })
}

fn leading_terms(gens: &[VectorPolynomial], ord: &WeightedOrder) -> Result<Vec<PositionedTerm>> {
    gens.iter()
        .enumerate()
        .map(|(index, g)| {
            g.leading_term(ord).map_err(|e| match e {
                Error::ZeroPolynomial(_) => Error::ZeroGenerator { index },
                other => other,
            })
        })
        .collect()
}

/// Indices ordered by strictly decreasing leading term.
fn sorted_by_leading_term(leads: &[PositionedTerm], ord: &WeightedOrder) -> Result<Vec<usize>> {
    let mut idx: Vec<usize> = (0..leads.len()).collect();
    idx.sort_by(|&a, &b| leads[b].compare(&leads[a], ord).then(a.cmp(&b)));
    for w in idx.windows(2) {
        if leads[w[0]].compare(&leads[w[1]], ord).is_eq() {
            return Err(Error::DuplicateLeadingTerm { first: w[0].min(w[1]), second: w[0].max(w[1]) });
        }
    }
    Ok(idx)
}

/// Exact squared division ratios for one division.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityRatio {
    /// `Σ‖a_i f_i‖² / ‖h‖²`.
    pub ratio_sq: Rational,
    /// `Σ‖a_i f_i‖² / (‖h‖² + ‖r‖²)`.
    pub remainder_adjusted: Rational,
    pub products_norm_sq: Rational,
    pub h_norm_sq: Rational,
    pub remainder_norm_sq: Rational,
}

impl StabilityRatio {
    fn from_norms(products: Vec<Rational>, h_norm_sq: Rational, remainder_norm_sq: Rational) -> Self {
        let products_norm_sq: Rational = products.into_iter().sum();
        Self {
            ratio_sq: &products_norm_sq / &h_norm_sq,
            remainder_adjusted: &products_norm_sq / (&h_norm_sq + &remainder_norm_sq),
            products_norm_sq,
            h_norm_sq,
            remainder_norm_sq,
        }
    }
}

pub fn stability_ratio(h: &Polynomial, gens: &[Polynomial], ord: &WeightedOrder, sp: &SpaceParams) -> Result<StabilityRatio> {
    let max_deg = gens.iter().chain(std::iter::once(h)).filter_map(Polynomial::total_degree).max().unwrap_or(0);
    let table = NormTable::new(sp, max_deg);
    stability_ratio_with(h, gens, ord, &table).map(|(r, _)| r)
}

/// As [`stability_ratio`], reusing a norm table and returning the division.
pub fn stability_ratio_with(
    h: &Polynomial,
    gens: &[Polynomial],
    ord: &WeightedOrder,
    table: &NormTable,
) -> Result<(StabilityRatio, DivisionResult<Polynomial>)> {
    if h.is_zero() {
        return Err(Error::ZeroPolynomial("stability ratio"));
    }
    let res = divide(h, gens, ord)?;
    let products = res.products(gens).iter().map(|p| table.poly_norm_sq(p)).collect::<Result<Vec<_>>>()?;
    let ratio = StabilityRatio::from_norms(products, table.poly_norm_sq(h)?, table.poly_norm_sq(&res.remainder)?);
    Ok((ratio, res))
}

pub fn stability_ratio_vector(
    h: &VectorPolynomial,
    gens: &[VectorPolynomial],
    ord: &WeightedOrder,
    sp: &SpaceParams,
) -> Result<(StabilityRatio, DivisionResult<VectorPolynomial>)> {
    if h.is_zero() {
        return Err(Error::ZeroPolynomial("stability ratio"));
    }
    let res = divide_vector(h, gens, ord)?;
    let products = res.products(gens);
    let max_deg = products
        .iter()
        .chain(std::iter::once(h))
        .flat_map(|v| v.components().iter().filter_map(Polynomial::total_degree))
        .max()
        .unwrap_or(0);
    let table = NormTable::new(sp, max_deg);
    let norms = products.iter().map(|p| table.vector_poly_norm_sq(p)).collect::<Result<Vec<_>>>()?;
    let ratio = StabilityRatio::from_norms(norms, table.vector_poly_norm_sq(h)?, table.vector_poly_norm_sq(&res.remainder)?);
    Ok((ratio, res))
}

/// Per-generator constant bounding one division step by a quasi-homogeneous
/// generator in two variables: `(2m)!/|a_{j_1}|² · Σ_j |a_j|²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepConstant {
    pub generator: usize,
    /// Weighted degree `m` of the generator.
    pub degree: u64,
    pub value: Rational,
}

pub fn step_constant(f: &Polynomial, ord: &WeightedOrder) -> Result<StepConstant> {
    if f.dim() != 2 || ord.dim() != 2 {
        return Err(Error::Unsupported("step constant is only defined for two variables".into()));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("step constant"));
    }
    let degree = f.quasi_degree(ord).ok_or(Error::NotQuasiHomogeneous { index: 0 })?;
    let lead = f.leading_term(ord)?;
    let total: Rational = f.terms().map(|(_, c)| c.norm_sqr()).sum();
    let fact = Rational::from_integer(factorial(2 * degree).into());
    Ok(StepConstant { generator: 0, degree, value: fact * total / lead.coeff.norm_sqr() })
}

pub fn step_constants(gens: &[Polynomial], ord: &WeightedOrder) -> Result<Vec<StepConstant>> {
    gens.iter()
        .enumerate()
        .map(|(i, f)| {
            step_constant(f, ord)
                .map(|c| StepConstant { generator: i, ..c })
                .map_err(|e| match e {
                    Error::NotQuasiHomogeneous { .. } => Error::NotQuasiHomogeneous { index: i },
                    other => other,
                })
        })
        .collect()
}

/// `√(k·C)`: a bound for `Σ‖a_i f_i‖ / ‖h‖` given `Σ‖a_i f_i‖² ≤ C‖h‖²`.
pub fn linear_constant(k: usize, ratio_sq: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    (k as f64 * ratio_sq.to_f64().unwrap_or(f64::INFINITY)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, parse_vector};

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, 2).unwrap()
    }

    fn v(s: &str) -> VectorPolynomial {
        parse_vector(s, 2).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn hand_run_examples() {
        let g = WeightedOrder::graded(2);
        let r = divide(&p("x^2 + x*y"), &[p("x")], &g).unwrap();
        assert_eq!(r.quotients, vec![p("x + y")]);
        assert!(r.remainder.is_zero());

        let r = divide(&p("y^2"), &[p("x")], &g).unwrap();
        assert!(r.quotients[0].is_zero());
        assert_eq!(r.remainder, p("y^2"));

        let r = divide(&p("x^2*y"), &[p("x^2"), p("x*y")], &g).unwrap();
        assert_eq!(r.quotients, vec![Polynomial::zero(2), p("x")]);
        assert!(r.remainder.is_zero());
        // same answer regardless of the caller's ordering
        let r = divide(&p("x^2*y"), &[p("x*y"), p("x^2")], &g).unwrap();
        assert_eq!(r.quotients, vec![p("x"), Polynomial::zero(2)]);
    }

    #[test]
    fn errors() {
        let g = WeightedOrder::graded(2);
        assert_eq!(divide(&p("x"), &[], &g).unwrap_err(), Error::EmptyGenerators);
        assert_eq!(divide(&p("x"), &[p("y"), p("0")], &g).unwrap_err(), Error::ZeroGenerator { index: 1 });
        assert_eq!(
            divide(&p("x"), &[p("x+y"), p("y"), p("x")], &g).unwrap_err(),
            Error::DuplicateLeadingTerm { first: 0, second: 2 }
        );
        assert!(divide(&parse_polynomial("z1", 3).unwrap(), &[p("x")], &g).is_err());
    }

    #[test]
    fn trace_records_every_step() {
        let g = WeightedOrder::graded(2);
        let r = divide(&p("x^2 + x*y + y^2"), &[p("x")], &g).unwrap();
        assert_eq!(r.trace.len(), 3);
        assert_eq!(r.trace[0].kind, StepKind::Divide { generator: 0 });
        assert_eq!(r.trace[2].kind, StepKind::ToRemainder);
        assert_eq!(r.trace_log(), "divide x^2 by f1\ndivide x*y by f1\nremainder y^2\n");
        let json = r.trace_json();
        assert_eq!(json[0]["kind"], "divide");
        assert_eq!(json[0]["generator"], 0);
        assert_eq!(json[2]["kind"], "to_remainder");
        assert_eq!(json[2]["term"], "y^2");
    }

    #[test]
    fn vector_examples() {
        let g = WeightedOrder::graded(2);
        let gens = [v("(x, 0, y)"), v("(0, x, y)")];
        let r = divide_vector(&v("(x*y^4, -x*y^4, 0)"), &gens, &g).unwrap();
        assert_eq!(r.quotients, vec![p("y^4"), p("-y^4")]);
        assert!(r.remainder.is_zero());

        let r = divide_vector(&gens[0], &gens, &g).unwrap();
        assert_eq!(r.quotients, vec![p("1"), p("0")]);

        let r = divide_vector(&v("(0, x*y, y^2)"), &gens, &g).unwrap();
        assert_eq!(r.quotients, vec![p("0"), p("y")]);
        assert!(r.remainder.is_zero());
        assert_eq!(r.reconstruct(&gens), v("(0, x*y, y^2)"));
    }

    #[test]
    fn stability_ratio_examples() {
        let g = WeightedOrder::graded(2);
        let da = SpaceParams::drury_arveson(2);
        let f = p("x^2 - 3*x*y");
        assert_eq!(stability_ratio(&f, &[f.clone()], &g, &da).unwrap().ratio_sq, q(1, 1));

        let gens = [v("(x, 0, y)"), v("(0, x, y)")];
        let alt = [gens[0].checked_sub(&gens[1]).unwrap(), gens[1].clone()];
        for n in 1..12i64 {
            let h = v(&format!("(x*y^{n}, -x*y^{n}, 0)"));
            let (r, _) = stability_ratio_vector(&h, &gens, &g, &da).unwrap();
            assert_eq!(r.ratio_sq, q(n + 2, 1));
            let (r, _) = stability_ratio_vector(&h, &alt, &g, &da).unwrap();
            assert_eq!(r.ratio_sq, q(1, 1));
        }
        assert!(stability_ratio(&Polynomial::zero(2), &[p("x")], &g, &da).is_err());
    }

    #[test]
    fn remainder_adjusted_ratio() {
        let g = WeightedOrder::graded(2);
        let da = SpaceParams::drury_arveson(2);
        // x^2 + y^2 = x·x + y^2: ‖x^2‖² = 1, ‖h‖² = 2, ‖r‖² = 1
        let r = stability_ratio(&p("x^2 + y^2"), &[p("x")], &g, &da).unwrap();
        assert_eq!(r.ratio_sq, q(1, 2));
        assert_eq!(r.remainder_adjusted, q(1, 3));
    }

    #[test]
    fn step_constant_examples() {
        let g = WeightedOrder::graded(2);
        assert_eq!(step_constant(&p("x"), &g).unwrap().value, q(2, 1));
        assert_eq!(step_constant(&p("x + y"), &g).unwrap().value, q(4, 1));
        assert_eq!(step_constant(&p("5/2*x^2*y"), &g).unwrap().value, q(720, 1));
        let w = WeightedOrder::new(vec![2, 1]).unwrap();
        let c = step_constant(&p("2*x + y^2"), &w).unwrap();
        assert_eq!((c.degree, c.value), (2, q(24 * 5, 4)));
        assert!(matches!(step_constant(&p("x + y^2"), &g), Err(Error::NotQuasiHomogeneous { .. })));
        assert!(step_constant(&parse_polynomial("z1", 3).unwrap(), &WeightedOrder::graded(3)).is_err());
        let all = step_constants(&[p("x"), p("x*y + y^2")], &g).unwrap();
        assert_eq!(all[1].generator, 1);
    }
}
