//! Exact norms on `H_d^(t)`.
//!
//! Monomials are orthogonal and `‖z^α‖_t² = α! / Π_{i=1}^{|α|} (d+t+i)`.
//! `t = −d` is the Drury–Arveson space, `t = −1` Hardy, `t = 0` Bergman.
//! Only the finite-product form is used, so every value is an exact rational.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::poly::{factorial, GaussianRational, Monomial, Polynomial, VectorPolynomial};
use crate::{Error, Rational, Result};

/// The pair `(d, t)` naming the space `H_d^(t)`; requires `t ≥ −d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpaceParams {
    d: usize,
    t: Rational,
}

impl SpaceParams {
    pub fn new(d: usize, t: Rational) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidSpace("d must be positive".into()));
        }
        let floor = -Rational::from_integer(BigInt::from(d));
        if t < floor {
            return Err(Error::InvalidSpace(format!("t = {t} is below -d = {floor}")));
        }
        Ok(Self { d, t })
    }

    pub fn with_int(d: usize, t: i64) -> Result<Self> {
        Self::new(d, Rational::from_integer(t.into()))
    }

    /// `H²_d`, i.e. `t = −d`.
    pub fn drury_arveson(d: usize) -> Self {
        Self::with_int(d, -(d as i64)).expect("t = -d is admissible")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }

    pub fn is_drury_arveson(&self) -> bool {
        self.t == -Rational::from_integer(BigInt::from(self.d))
    }

    /// The space `H_d^(t+1)`.
    pub fn shifted_up(&self) -> Self {
        Self { d: self.d, t: &self.t + Rational::one() }
    }

    /// `d + t + i`.
    fn factor(&self, i: u64) -> Rational {
        Rational::from_integer(BigInt::from(self.d as u64 + i)) + &self.t
    }

    /// `Π_{i=1}^{n} (d+t+i)`.
    pub fn rising_product(&self, n: u64) -> Rational {
        self.rising_range(1, n)
    }

    /// `Π_{i=lo}^{hi} (d+t+i)`, multiplied out over the integers and
    /// reduced once.
    fn rising_range(&self, lo: u64, hi: u64) -> Rational {
        let (p, q) = (self.t.numer(), self.t.denom());
        let mut num = BigInt::one();
        let mut count = 0u32;
        for i in lo..=hi {
            num *= q * BigInt::from(self.d as u64 + i) + p;
            count += 1;
        }
        Rational::new(num, num_traits::pow(q.clone(), count as usize))
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: dim });
        }
        Ok(())
    }
}

pub fn monomial_norm_sq(alpha: &Monomial, sp: &SpaceParams) -> Result<Rational> {
    sp.check_dim(alpha.dim())?;
    let num = Rational::from_integer(BigInt::from(alpha.factorial()));
    Ok(num / sp.rising_product(alpha.total_degree()))
}

pub fn poly_norm_sq(p: &Polynomial, sp: &SpaceParams) -> Result<Rational> {
    sp.check_dim(p.dim())?;
    let mut total = Rational::zero();
    for (m, c) in p.terms() {
        total += c.norm_sqr() * monomial_norm_sq(m, sp)?;
    }
    Ok(total)
}

pub fn vector_poly_norm_sq(v: &VectorPolynomial, sp: &SpaceParams) -> Result<Rational> {
    v.components().iter().try_fold(Rational::zero(), |acc, c| Ok(acc + poly_norm_sq(c, sp)?))
}

/// `⟨p, q⟩_t = Σ_α c_α(p)·conj(c_α(q))·‖z^α‖_t²`.
pub fn inner_product(p: &Polynomial, q: &Polynomial, sp: &SpaceParams) -> Result<GaussianRational> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: q.dim() });
    }
    sp.check_dim(p.dim())?;
    let mut total = GaussianRational::zero();
    for (m, a) in p.terms() {
        let b = q.coeff(m);
        if !b.is_zero() {
            total += &(a * &b.conj()).scale(&monomial_norm_sq(m, sp)?);
        }
    }
    Ok(total)
}

/// `c_{n,t} = n! / Π_{i=1}^{n} (d+t+i)`, the ratio `‖f‖_t² / ‖f‖²_{H²_d}` on
/// homogeneous polynomials of degree `n`.
pub fn c_ratio(n: u64, sp: &SpaceParams) -> Rational {
    Rational::from_integer(BigInt::from(factorial(n))) / sp.rising_product(n)
}

/// `c_{⌊m/n⌋,t} / c_{m,t}`.
pub fn c_ratio_limit_probe(n_weight: u64, sp: &SpaceParams, m: u64) -> Result<Rational> {
    if n_weight == 0 || m < n_weight {
        return Err(Error::InvalidArgument(format!("need 1 <= n_weight <= m, got n_weight = {n_weight}, m = {m}")));
    }
    // c_{k}/c_{m} = (d+t+k+1)…(d+t+m) / ((k+1)…m)
    let k = m / n_weight;
    let falling: BigInt = (k + 1..=m).map(BigInt::from).product();
    Ok(sp.rising_range(k + 1, m) / Rational::from_integer(falling))
}

/// Outcome of checking `c_{m,t}‖f‖²_{H²_d} ≤ ‖f‖_t² ≤ c_{k,t}‖f‖²_{H²_d}`,
/// where `k`/`m` are the lowest/highest degrees of homogeneous parts of `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormEquivalence {
    pub min_degree: u64,
    pub max_degree: u64,
    pub drury_arveson_norm_sq: Rational,
    pub norm_sq: Rational,
    pub lower_bound: Rational,
    pub upper_bound: Rational,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

pub fn equivalence_bounds_check(f: &Polynomial, sp: &SpaceParams) -> Result<NormEquivalence> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("norm equivalence check"));
    }
    let k = f.min_total_degree().expect("nonzero");
    let m = f.total_degree().expect("nonzero");
    let da = poly_norm_sq(f, &SpaceParams::drury_arveson(sp.d()))?;
    let norm_sq = poly_norm_sq(f, sp)?;
    let lower_bound = c_ratio(m, sp) * &da;
    let upper_bound = c_ratio(k, sp) * &da;
    Ok(NormEquivalence {
        min_degree: k,
        max_degree: m,
        lower_ok: lower_bound <= norm_sq,
        upper_ok: norm_sq <= upper_bound,
        drury_arveson_norm_sq: da,
        norm_sq,
        lower_bound,
        upper_bound,
    })
}

/// Precomputed `1/Π(d+t+i)` and factorials up to a degree bound, for hot
/// loops that evaluate many norms in the same space.
#[derive(Clone, Debug)]
pub struct NormTable {
    space: SpaceParams,
    inv_rising: Vec<Rational>,
    factorials: Vec<BigUint>,
}

impl NormTable {
    pub fn new(space: &SpaceParams, max_degree: u64) -> Self {
        let mut inv_rising = Vec::with_capacity(max_degree as usize + 1);
        let mut factorials = Vec::with_capacity(max_degree as usize + 1);
        let mut prod = Rational::one();
        let mut fact = BigUint::one();
        for n in 0..=max_degree {
            if n > 0 {
                prod *= space.factor(n);
                fact *= n;
            }
            inv_rising.push(prod.recip());
            factorials.push(fact.clone());
        }
        Self { space: space.clone(), inv_rising, factorials }
    }

    pub fn space(&self) -> &SpaceParams {
        &self.space
    }

    pub fn monomial_norm_sq(&self, alpha: &Monomial) -> Rational {
        let n = alpha.total_degree() as usize;
        if n >= self.inv_rising.len() {
            return monomial_norm_sq(alpha, &self.space).expect("dimension checked by caller");
        }
        let num: BigUint = alpha.exponents().iter().fold(BigUint::one(), |acc, &e| acc * &self.factorials[e as usize]);
        Rational::from_integer(BigInt::from(num)) * &self.inv_rising[n]
    }

    pub fn poly_norm_sq(&self, p: &Polynomial) -> Result<Rational> {
        self.space.check_dim(p.dim())?;
        Ok(p.terms().fold(Rational::zero(), |acc, (m, c)| acc + c.norm_sqr() * self.monomial_norm_sq(m)))
    }

    pub fn vector_poly_norm_sq(&self, v: &VectorPolynomial) -> Result<Rational> {
        v.components().iter().try_fold(Rational::zero(), |acc, c| Ok(acc + self.poly_norm_sq(c)?))
    }
}
