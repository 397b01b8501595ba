//! Degree-slice sweeps of the division ratio, the vector-valued example with
//! unbounded ratios, and the finite-section gap of the row operator
//! `(m_1, …, m_k) ↦ Σ m_i`.

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::division::{linear_constant, stability_ratio_with};
use crate::linalg::ExactSpan;
use crate::norms::{c_ratio, poly_norm_sq, vector_poly_norm_sq, NormTable, SpaceParams};
use crate::operators::{ideal_products, orthonormalize, CMatrix, TruncationBasis, AMBIGUOUS_BAND};
use crate::poly::{format_polynomial, GaussianRational, Monomial, Polynomial, Term, VectorPolynomial, WeightedOrder};
use crate::{Error, Rational, Result};

/// Plateau: top-third maximum at most this multiple of the middle-third one.
pub const PLATEAU_FACTOR: f64 = 1.05;
/// Growth: top-third maximum at least this multiple of the bottom-third one.
pub const GROWTH_FACTOR: f64 = 2.0;
/// Random slice elements use integer coefficients in `[−COEFF_BOX, COEFF_BOX]`.
pub const COEFF_BOX: i64 = 9;

/// A spanning, linearly independent subset of
/// `{z^α f_i : deg(z^α f_i) = q}`, chosen greedily in generator order.
pub fn slice_basis(gens: &[Polynomial], ord: &WeightedOrder, q: u64) -> Result<Vec<Polynomial>> {
    let mut span = ExactSpan::new();
    let mut out = Vec::new();
    for (index, f) in gens.iter().enumerate() {
        let deg = f.quasi_degree(ord).ok_or(Error::NotQuasiHomogeneous { index })?;
        if deg > q {
            continue;
        }
        for beta in Monomial::all_of_weighted_degree(ord.weights(), q - deg) {
            let p = f.mul_term(&Term::new(GaussianRational::one(), beta));
            if span.insert(&p) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    BoundedPlateau,
    Growing,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::BoundedPlateau => "bounded-plateau",
            Verdict::Growing => "growing",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Verdict from a `(degree, max ratio)` series. The degree range is cut at
/// `lo + span/3` and `lo + 2·span/3`; boundary degrees belong to both sides.
pub fn verdict(series: &[(u64, f64)]) -> Verdict {
    let (Some(lo), Some(hi)) = (series.iter().map(|s| s.0).min(), series.iter().map(|s| s.0).max()) else {
        return Verdict::Inconclusive;
    };
    let span = hi - lo;
    if span < 2 {
        return Verdict::Inconclusive;
    }
    let (b1, b2) = (lo + span / 3, lo + 2 * span / 3);
    let max_in = |a: u64, b: u64| series.iter().filter(|s| s.0 >= a && s.0 <= b).map(|s| s.1).fold(f64::NAN, f64::max);
    let (bottom, middle, top) = (max_in(lo, b1), max_in(b1, b2), max_in(b2, hi));
    if top <= PLATEAU_FACTOR * middle {
        Verdict::BoundedPlateau
    } else if top >= GROWTH_FACTOR * bottom {
        Verdict::Growing
    } else {
        Verdict::Inconclusive
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeRecord {
    pub degree: u64,
    pub slice_dim: usize,
    pub evaluated: usize,
    pub max_ratio_sq: Rational,
    pub mean_ratio_sq: Rational,
    /// Largest `‖r‖²` seen; zero whenever every division was exact.
    pub max_remainder_norm_sq: Rational,
}

#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub generators: Vec<Polynomial>,
    pub order: WeightedOrder,
    pub space: SpaceParams,
    pub q_min: u64,
    pub q_max: u64,
    pub records: Vec<DegreeRecord>,
    pub sup_ratio_sq: Rational,
    /// `√(k·sup)`.
    pub linear_constant: f64,
    pub samples: usize,
    pub seed: u64,
    pub verdict: Verdict,
}

impl StabilityReport {
    pub fn series(&self) -> Vec<(u64, f64)> {
        self.records.iter().map(|r| (r.degree, r.max_ratio_sq.to_f64().unwrap_or(f64::INFINITY))).collect()
    }

    /// Maximum ratio over records with degree in `[a, b]`.
    pub fn max_over(&self, a: u64, b: u64) -> Option<Rational> {
        self.records.iter().filter(|r| r.degree >= a && r.degree <= b).map(|r| r.max_ratio_sq.clone()).max()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "params": {
                "generators": self.generators.iter().map(|g| format_polynomial(g, &self.order)).collect::<Vec<_>>(),
                "weights": self.order.weights(),
                "d": self.space.d(),
                "t": self.space.t().to_string(),
                "q_min": self.q_min,
                "q_max": self.q_max,
                "samples": self.samples,
                "coefficient_box": COEFF_BOX,
                "plateau_factor": PLATEAU_FACTOR,
                "growth_factor": GROWTH_FACTOR,
            },
            "records": self.records.iter().map(|r| json!({
                "degree": r.degree,
                "slice_dim": r.slice_dim,
                "evaluated": r.evaluated,
                "max_ratio_sq": r.max_ratio_sq.to_string(),
                "mean_ratio_sq": r.mean_ratio_sq.to_string(),
                "max_remainder_norm_sq": r.max_remainder_norm_sq.to_string(),
            })).collect::<Vec<_>>(),
            "sup": self.sup_ratio_sq.to_string(),
            "linear_constant": self.linear_constant,
            "verdict": self.verdict.to_string(),
            "seed": self.seed,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,slice_dim,max_ratio_sq,mean_ratio_sq,max_ratio_sq_float\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.degree,
                r.slice_dim,
                r.max_ratio_sq,
                r.mean_ratio_sq,
                r.max_ratio_sq.to_f64().unwrap_or(f64::NAN)
            ));
        }
        out
    }
}

fn common_degree(gens: &[Polynomial], ord: &WeightedOrder) -> Result<u64> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let degrees = gens
        .iter()
        .enumerate()
        .map(|(index, g)| g.quasi_degree(ord).ok_or(Error::NotQuasiHomogeneous { index }))
        .collect::<Result<Vec<_>>>()?;
    if degrees.iter().any(|&d| d != degrees[0]) {
        return Err(Error::UnequalDegrees(degrees));
    }
    Ok(degrees[0])
}

/// Random stream for one slice, derived from `(seed, degree)`.
pub fn slice_rng(seed: u64, degree: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(degree);
    rng
}

fn random_combination(basis: &[Polynomial], rng: &mut ChaCha8Rng) -> Polynomial {
    let dim = basis[0].dim();
    loop {
        let mut p = Polynomial::zero(dim);
        for b in basis {
            let c: i64 = rng.random_range(-COEFF_BOX..=COEFF_BOX);
            if c != 0 {
                p = &p + &b.scale(&GaussianRational::from_int(c));
            }
        }
        if !p.is_zero() {
            return p;
        }
    }
}

/// Division ratios over every slice basis element and `samples` random
/// combinations, for each degree `q ∈ [m, q_max]`.
pub fn certify(
    gens: &[Polynomial],
    ord: &WeightedOrder,
    sp: &SpaceParams,
    q_max: u64,
    samples: usize,
    seed: u64,
) -> Result<StabilityReport> {
    let m = common_degree(gens, ord)?;
    if q_max < m {
        return Err(Error::InvalidArgument(format!("q_max = {q_max} is below the generator degree {m}")));
    }
    let table = NormTable::new(sp, q_max);
    let mut records = Vec::new();
    for q in m..=q_max {
        let basis = slice_basis(gens, ord, q)?;
        let mut rng = slice_rng(seed, q);
        let mut elements = basis.clone();
        if !basis.is_empty() {
            elements.extend((0..samples).map(|_| random_combination(&basis, &mut rng)));
        }
        let mut max = Rational::zero();
        let mut sum = Rational::zero();
        let mut max_rem = Rational::zero();
        for h in &elements {
            let (ratio, _) = stability_ratio_with(h, gens, ord, &table)?;
            sum += &ratio.ratio_sq;
            max = max.max(ratio.ratio_sq);
            max_rem = max_rem.max(ratio.remainder_norm_sq);
        }
        let mean = if elements.is_empty() { Rational::zero() } else { sum / Rational::from_integer(elements.len().into()) };
        records.push(DegreeRecord {
            degree: q,
            slice_dim: basis.len(),
            evaluated: elements.len(),
            max_ratio_sq: max,
            mean_ratio_sq: mean,
            max_remainder_norm_sq: max_rem,
        });
    }
    let sup = records.iter().map(|r| r.max_ratio_sq.clone()).max().unwrap_or_else(Rational::zero);
    let mut report = StabilityReport {
        generators: gens.to_vec(),
        order: ord.clone(),
        space: sp.clone(),
        q_min: m,
        q_max,
        records,
        linear_constant: linear_constant(gens.len(), &sup),
        sup_ratio_sq: sup,
        samples,
        seed,
        verdict: Verdict::Inconclusive,
    };
    report.verdict = verdict(&report.series());
    Ok(report)
}

/// `h_n = (x y^n, −x y^n, 0)`.
pub fn counterexample_h(n: u32) -> VectorPolynomial {
    let p = Polynomial::monomial(Monomial::new(vec![1, n]));
    VectorPolynomial::new(vec![p.clone(), -&p, Polynomial::zero(2)]).expect("uniform dimension")
}

/// `f_1 = (x, 0, y)` and `f_2 = (0, x, y)`.
pub fn counterexample_generators() -> (VectorPolynomial, VectorPolynomial) {
    let x = Polynomial::var(2, 0);
    let y = Polynomial::var(2, 1);
    let z = Polynomial::zero(2);
    (
        VectorPolynomial::new(vec![x.clone(), z.clone(), y.clone()]).expect("shape"),
        VectorPolynomial::new(vec![z, x, y]).expect("shape"),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VectorRow {
    pub n: u32,
    #[serde(serialize_with = "ser_rational")]
    pub ratio_sq: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub remainder_norm_sq: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Exact division ratios of `h_n` against the supplied module basis, for
/// `n = 1..=n_max`.
pub fn certify_vector(
    gens: &[VectorPolynomial],
    ord: &WeightedOrder,
    sp: &SpaceParams,
    n_max: u32,
) -> Result<Vec<VectorRow>> {
    if sp.d() != 2 || ord.dim() != 2 {
        return Err(Error::Unsupported("the vector example lives in two variables".into()));
    }
    if let Some(g) = gens.iter().find(|g| g.rank() != 3) {
        return Err(Error::RankMismatch { expected: 3, found: g.rank() });
    }
    (1..=n_max)
        .map(|n| {
            let (ratio, _) = crate::division::stability_ratio_vector(&counterexample_h(n), gens, ord, sp)?;
            Ok(VectorRow { n, ratio_sq: ratio.ratio_sq, remainder_norm_sq: ratio.remainder_norm_sq })
        })
        .collect()
}

/// Norms in the rewriting `h = p f_1 + q f_2 = p(f_1 − f_2) + (p+q) f_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitBounds {
    pub h_norm_sq: Rational,
    /// `‖p(f_1 − f_2)‖²`.
    pub first_sq: Rational,
    /// `‖(p+q) f_2‖²`.
    pub second_sq: Rational,
    /// `first_sq ≤ 2‖h‖²`.
    pub first_ok: bool,
    /// `second_sq ≤ 3‖h‖²`.
    pub second_ok: bool,
}

pub fn counterexample_split(p: &Polynomial, q: &Polynomial, sp: &SpaceParams) -> Result<SplitBounds> {
    let (f1, f2) = counterexample_generators();
    let h = f1.mul_poly(p)?.checked_add(&f2.mul_poly(q)?)?;
    let first = f1.checked_sub(&f2)?.mul_poly(p)?;
    let second = f2.mul_poly(&p.checked_add(q)?)?;
    debug_assert_eq!(first.checked_add(&second)?, h);
    let h_norm_sq = vector_poly_norm_sq(&h, sp)?;
    let first_sq = vector_poly_norm_sq(&first, sp)?;
    let second_sq = vector_poly_norm_sq(&second, sp)?;
    let two = Rational::from_integer(2.into());
    let three = Rational::from_integer(3.into());
    Ok(SplitBounds {
        first_ok: first_sq <= &two * &h_norm_sq,
        second_ok: second_sq <= &three * &h_norm_sq,
        h_norm_sq,
        first_sq,
        second_sq,
    })
}

/// `c_{q,t}‖h‖²_{H²_d} ≤ ‖h‖_t² ≤ c_{⌊q/n⌋,t}‖h‖²_{H²_d}` for `h` of weighted
/// degree `q`, with `n` the largest weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferCheck {
    pub degree: u64,
    pub lower: Rational,
    pub norm_sq: Rational,
    pub upper: Rational,
    pub holds: bool,
}

pub fn transfer_check(h: &Polynomial, ord: &WeightedOrder, sp: &SpaceParams) -> Result<TransferCheck> {
    let q = h.quasi_degree(ord).ok_or(Error::NotQuasiHomogeneous { index: 0 })?;
    let n = u64::from(*ord.weights().iter().max().expect("nonempty weights"));
    let da = poly_norm_sq(h, &SpaceParams::drury_arveson(sp.d()))?;
    let norm_sq = poly_norm_sq(h, sp)?;
    let lower = c_ratio(q, sp) * &da;
    let upper = c_ratio(q / n, sp) * &da;
    Ok(TransferCheck { degree: q, holds: lower <= norm_sq && norm_sq <= upper, lower, norm_sq, upper })
}

#[derive(Clone, Debug, Serialize)]
pub struct RowOperatorGap {
    pub max_degree: u32,
    /// Least nonzero singular value.
    pub sigma_min: f64,
    /// `1/σ_min²`.
    pub constant: f64,
    pub block_dims: Vec<usize>,
    pub ambient_dim: usize,
    pub kernel_dim: usize,
}

/// Least singular value, off the kernel, of `T(m_1, …, m_k) = Σ m_i` from
/// `⊕_i span{z^α f_i : deg ≤ D}` (each block orthonormal) into the
/// degree-`≤ D` truncation.
pub fn row_operator_gap(gens: &[Polynomial], sp: &SpaceParams, max_degree: u32) -> Result<RowOperatorGap> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let top = gens.iter().filter_map(Polynomial::total_degree).max().unwrap_or(0);
    if u64::from(max_degree) < top {
        return Err(Error::InvalidArgument(format!("truncation {max_degree} is below generator degree {top}")));
    }
    let basis = TruncationBasis::new(sp, max_degree);
    let mut blocks = Vec::new();
    for (index, g) in gens.iter().enumerate() {
        let block = ideal_products(std::slice::from_ref(g), &basis)
            .map_err(|e| if let Error::ZeroGenerator { .. } = e { Error::ZeroGenerator { index } } else { e })?;
        blocks.push(orthonormalize(&block)?.basis);
    }
    let block_dims: Vec<usize> = blocks.iter().map(|b| b.ncols()).collect();
    let cols: Vec<_> = blocks.iter().flat_map(|b| b.column_iter().map(|c| c.into_owned()).collect::<Vec<_>>()).collect();
    let t = CMatrix::from_columns(&cols);
    let s = crate::operators::singular_values(&t);
    let smax = s.first().copied().unwrap_or(0.0);
    let mut sigma_min = f64::INFINITY;
    let mut kernel_dim = t.ncols().saturating_sub(s.len());
    for &x in s.iter() {
        let rel = (x / smax).powi(2);
        if rel > AMBIGUOUS_BAND.0 && rel < AMBIGUOUS_BAND.1 {
            return Err(Error::Numerical(format!(
                "cannot separate the kernel: relative singular value {:.3e}",
                x / smax
            )));
        }
        if rel <= AMBIGUOUS_BAND.0 {
            kernel_dim += 1;
        } else {
            sigma_min = sigma_min.min(x);
        }
    }
    Ok(RowOperatorGap {
        max_degree,
        sigma_min,
        constant: 1.0 / (sigma_min * sigma_min),
        block_dims,
        ambient_dim: basis.len(),
        kernel_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, 2).unwrap()
    }

    fn ps(v: &[&str]) -> Vec<Polynomial> {
        v.iter().map(|s| p(s)).collect()
    }

    fn graded() -> WeightedOrder {
        WeightedOrder::graded(2)
    }

    fn int(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn slices() {
        let g = graded();
        let s = slice_basis(&ps(&["x"]), &g, 2).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.contains(&p("x^2")) && s.contains(&p("x*y")));
        assert!(slice_basis(&ps(&["x^2"]), &g, 1).unwrap().is_empty());
        let s = slice_basis(&ps(&["x^2", "x*y"]), &g, 3).unwrap();
        assert_eq!(s.len(), 3);
        for m in ["x^3", "x^2*y", "x*y^2"] {
            assert!(s.contains(&p(m)));
        }
    }

    #[test]
    fn verdict_rules() {
        let flat: Vec<_> = (0..30).map(|q| (q, 1.0)).collect();
        assert_eq!(verdict(&flat), Verdict::BoundedPlateau);
        let lin: Vec<_> = (1..=50).map(|n| (n, n as f64 + 2.0)).collect();
        assert_eq!(verdict(&lin), Verdict::Growing);
        let slow: Vec<_> = (0..30).map(|q| (q, 1.0 + q as f64 / 100.0)).collect();
        assert_eq!(verdict(&slow), Verdict::Inconclusive);
        assert_eq!(verdict(&[(3, 1.0)]), Verdict::Inconclusive);
        assert_eq!(verdict(&[]), Verdict::Inconclusive);
    }

    #[test]
    fn single_generator_ratio_one() {
        let sp = SpaceParams::drury_arveson(2);
        let r = certify(&ps(&["x^2 + (1-i)*x*y - y^2"]), &graded(), &sp, 8, 5, 3).unwrap();
        assert_eq!(r.sup_ratio_sq, int(1));
        assert!(r.records.iter().all(|rec| rec.max_ratio_sq == int(1) && rec.max_remainder_norm_sq.is_zero()));
        assert_eq!(r.verdict, Verdict::BoundedPlateau);
    }

    #[test]
    fn groebner_slices_have_zero_remainder() {
        let sp = SpaceParams::drury_arveson(2);
        let gb = crate::groebner::buchberger(&ps(&["x^2+y^2", "x*y"]), &graded()).unwrap();
        let m = 3;
        let eq = crate::groebner::equalized_basis(&gb, m).unwrap();
        let r = certify(&eq, &graded(), &sp, 12, 10, 1).unwrap();
        assert!(r.records.iter().all(|rec| rec.max_remainder_norm_sq.is_zero()));
        assert!(r.sup_ratio_sq >= int(1));
        assert!(r.sup_ratio_sq.to_f64().unwrap() <= r.linear_constant.powi(2) + 1e-9);
    }

    #[test]
    fn certify_errors() {
        let sp = SpaceParams::drury_arveson(2);
        assert!(matches!(certify(&ps(&["x", "y^2"]), &graded(), &sp, 5, 1, 0), Err(Error::UnequalDegrees(_))));
        assert!(certify(&ps(&["x^2"]), &graded(), &sp, 1, 1, 0).is_err());
        assert!(certify(&ps(&["x + y^2"]), &graded(), &sp, 4, 1, 0).is_err());
    }

    #[test]
    fn report_is_deterministic() {
        let sp = SpaceParams::with_int(2, 0).unwrap();
        let gens = ps(&["x^2 - 2*x*y", "x*y + y^2", "y^2"]);
        let a = certify(&gens, &graded(), &sp, 6, 7, 11).unwrap();
        let b = certify(&gens, &graded(), &sp, 6, 7, 11).unwrap();
        assert_eq!(a.to_json().to_string(), b.to_json().to_string());
        assert!(a.to_csv().starts_with("degree,"));
        assert_eq!(a.to_csv().lines().count(), 6);
    }

    #[test]
    fn vector_example() {
        let sp = SpaceParams::drury_arveson(2);
        let (f1, f2) = counterexample_generators();
        let rows = certify_vector(&[f1.clone(), f2.clone()], &graded(), &sp, 6).unwrap();
        for r in &rows {
            assert_eq!(r.ratio_sq, int(i64::from(r.n) + 2));
        }
        let diff = f1.checked_sub(&f2).unwrap();
        let rows = certify_vector(&[diff, f2], &graded(), &sp, 6).unwrap();
        assert!(rows.iter().all(|r| r.ratio_sq == int(1) && r.remainder_norm_sq.is_zero()));
        let series: Vec<_> =
            certify_vector(&[f1.clone(), counterexample_generators().1], &graded(), &sp, 50)
                .unwrap()
                .iter()
                .map(|r| (u64::from(r.n), r.ratio_sq.to_f64().unwrap()))
                .collect();
        assert_eq!(verdict(&series), Verdict::Growing);
    }

    #[test]
    fn split_bounds() {
        let sp = SpaceParams::drury_arveson(2);
        let b = counterexample_split(&p("y^3 - 2*x"), &p("(1+i)*x*y + 4"), &sp).unwrap();
        assert!(b.first_ok && b.second_ok);
        let b = counterexample_split(&p("y^4"), &p("0"), &sp).unwrap();
        // ‖x y^4‖² = 1/5 in H²_2
        assert_eq!(b.first_sq, int(2) * Rational::new(1.into(), 5.into()));
    }

    #[test]
    fn transfer_chain() {
        let g = graded();
        for t in [-2, 0] {
            let sp = SpaceParams::with_int(2, t).unwrap();
            for q in 2..=10 {
                for h in slice_basis(&ps(&["x^2", "x*y", "y^2"]), &g, q).unwrap() {
                    assert!(transfer_check(&h, &g, &sp).unwrap().holds);
                }
            }
        }
        let w = WeightedOrder::new(vec![2, 1]).unwrap();
        let sp = SpaceParams::with_int(2, 1).unwrap();
        let c = transfer_check(&p("x^2 + 3*x*y^2 - y^4"), &w, &sp).unwrap();
        assert!(c.holds && c.lower < c.norm_sq && c.norm_sq < c.upper);
    }

    #[test]
    fn row_operator() {
        let sp = SpaceParams::drury_arveson(2);
        let r = row_operator_gap(&ps(&["x^2 + x*y"]), &sp, 6).unwrap();
        assert!((r.sigma_min - 1.0).abs() < 1e-10);
        assert_eq!(r.kernel_dim, 0);

        let gaps: Vec<f64> = [4, 6, 8].iter().map(|&d| row_operator_gap(&ps(&["x", "y"]), &sp, d).unwrap().sigma_min).collect();
        assert!(gaps.iter().all(|&s| s > 0.0));

        let r = row_operator_gap(&ps(&["x", "x"]), &sp, 5).unwrap();
        assert_eq!(r.kernel_dim, r.block_dims[0]);
        assert!((r.sigma_min - 2f64.sqrt()).abs() < 1e-10);
    }
}
