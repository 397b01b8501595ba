//! Finite sections of the shift tuple on `H_d^(t)`.
//!
//! Everything here is double precision. Exact norms are converted once, when
//! a [`TruncationBasis`] is built; coordinates are taken in the normalised
//! monomial basis `z^α/‖z^α‖_t`, so the space inner product becomes the
//! Euclidean one.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::norms::{poly_norm_sq, SpaceParams};
use crate::poly::{GaussianRational, Monomial, Polynomial, Term};
use crate::{Error, Rational, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Relative cutoff on `σ²/σ²_max` below which a direction is treated as
/// dependent.
pub const RANK_TOL: f64 = 1e-10;
/// Relative `σ²/σ²_max` band around [`RANK_TOL`] where the rank decision is
/// refused rather than guessed.
pub const AMBIGUOUS_BAND: (f64, f64) = (1e-12, 1e-8);

/// All monomials of total degree `≤ D`, ordered by degree.
#[derive(Clone, Debug)]
pub struct TruncationBasis {
    space: SpaceParams,
    max_degree: u32,
    monomials: Vec<Monomial>,
    norms: Vec<f64>,
    index: HashMap<Monomial, usize>,
}

impl TruncationBasis {
    pub fn new(space: &SpaceParams, max_degree: u32) -> Self {
        let d = space.d();
        let monomials: Vec<Monomial> =
            (0..=max_degree).flat_map(|k| Monomial::all_of_total_degree(d, k)).collect();
        let norms = monomials
            .iter()
            .map(|m| {
                let n = crate::norms::monomial_norm_sq(m, space).expect("dimension matches");
                n.to_f64().expect("finite norm").sqrt()
            })
            .collect();
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Self { space: space.clone(), max_degree, monomials, norms, index }
    }

    pub fn space(&self) -> &SpaceParams {
        &self.space
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn norm(&self, i: usize) -> f64 {
        self.norms[i]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn degree_of(&self, i: usize) -> u32 {
        self.monomials[i].total_degree() as u32
    }

    /// Number of monomials of degree `≤ k`; they form a prefix.
    pub fn prefix_len(&self, k: u32) -> usize {
        self.monomials.partition_point(|m| m.total_degree() <= u64::from(k))
    }

    /// Coordinates of `p` in the normalised basis.
    pub fn coords(&self, p: &Polynomial) -> Result<CVector> {
        if p.dim() != self.space.d() {
            return Err(Error::DimensionMismatch { expected: self.space.d(), found: p.dim() });
        }
        let mut v = CVector::zeros(self.len());
        for (m, c) in p.terms() {
            let i = self.index_of(m).ok_or_else(|| {
                Error::InvalidArgument(format!("monomial {m} exceeds truncation degree {}", self.max_degree))
            })?;
            v[i] = c.to_c64() * self.norms[i];
        }
        Ok(v)
    }
}

/// A matrix together with the truncations it maps between.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub matrix: CMatrix,
    pub domain: TruncationBasis,
    pub codomain: TruncationBasis,
}

impl OperatorMatrix {
    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix {
            matrix: self.matrix.adjoint(),
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
        }
    }

    /// Restriction to degrees `≤ k` on both sides.
    pub fn compress(&self, k: u32) -> OperatorMatrix {
        let rows = self.codomain.prefix_len(k);
        let cols = self.domain.prefix_len(k);
        OperatorMatrix {
            matrix: self.matrix.view((0, 0), (rows, cols)).into_owned(),
            domain: TruncationBasis::new(self.domain.space(), k.min(self.domain.max_degree())),
            codomain: TruncationBasis::new(self.codomain.space(), k.min(self.codomain.max_degree())),
        }
    }
}

fn check_index(i: usize, d: usize) -> Result<()> {
    if i == 0 || i > d {
        return Err(Error::InvalidArgument(format!("variable index {i} outside 1..={d}")));
    }
    Ok(())
}

/// Exact squared matrix entry of `S_i` at column `α`:
/// `‖z^{α+e_i}‖²/‖z^α‖² = (α_i + 1)/(d + t + |α| + 1)`.
pub fn shift_weight_sq(alpha: &Monomial, i: usize, sp: &SpaceParams) -> Rational {
    let num = Rational::from_integer((alpha.exponents()[i - 1] + 1).into());
    let den = Rational::from_integer((sp.d() as u64 + alpha.total_degree() + 1).into()) + sp.t();
    num / den
}

/// `S_i` (1-based `i`) from the degree-`≤ D` truncation into the
/// degree-`≤ D+1` one.
pub fn mult_op(i: usize, sp: &SpaceParams, max_degree: u32) -> Result<OperatorMatrix> {
    check_index(i, sp.d())?;
    let domain = TruncationBasis::new(sp, max_degree);
    let codomain = TruncationBasis::new(sp, max_degree + 1);
    let mut matrix = CMatrix::zeros(codomain.len(), domain.len());
    for (col, alpha) in domain.monomials().iter().enumerate() {
        let target = alpha.mul(&Monomial::var(sp.d(), i - 1));
        let row = codomain.index_of(&target).expect("degree D+1 present");
        let w = shift_weight_sq(alpha, i, sp).to_f64().expect("finite").sqrt();
        matrix[(row, col)] = Complex64::new(w, 0.0);
    }
    Ok(OperatorMatrix { matrix, domain, codomain })
}

/// `S_i` compressed to the degree-`≤ D` truncation.
pub fn mult_op_square(i: usize, sp: &SpaceParams, max_degree: u32) -> Result<OperatorMatrix> {
    Ok(mult_op(i, sp, max_degree)?.compress(max_degree))
}

/// An orthonormal basis for the column span of `v`, from the SVD of the
/// column-normalised matrix.
#[derive(Clone, Debug)]
pub struct Orthonormalized {
    pub basis: CMatrix,
    pub rank: usize,
    /// `σ_max/σ_min` over the retained directions.
    pub condition: f64,
}

pub fn orthonormalize(v: &CMatrix) -> Result<Orthonormalized> {
    let rows = v.nrows();
    let cols: Vec<CVector> = v
        .column_iter()
        .filter_map(|c| {
            let n = c.norm();
            (n > 0.0).then(|| c.unscale(n))
        })
        .collect();
    if cols.is_empty() {
        return Ok(Orthonormalized { basis: CMatrix::zeros(rows, 0), rank: 0, condition: 1.0 });
    }
    let w = CMatrix::from_columns(&cols);
    // Range of W from the eigenpairs of W W^*; eigenvalues are σ².
    let eig = (&w * w.adjoint()).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let lmax = eig.eigenvalues[order[0]];
    let mut kept = Vec::new();
    let mut lmin = lmax;
    for &k in &order {
        let l = eig.eigenvalues[k];
        let rel = l / lmax;
        if rel > AMBIGUOUS_BAND.0 && rel < AMBIGUOUS_BAND.1 {
            return Err(Error::Numerical(format!(
                "Gram matrix rank is ambiguous: relative eigenvalue {rel:.3e}, condition estimate {:.3e}",
                (lmax / l).sqrt()
            )));
        }
        if rel > RANK_TOL {
            kept.push(eig.eigenvectors.column(k).into_owned());
            lmin = l;
        }
    }
    let (smax, smin) = (lmax.sqrt(), lmin.sqrt());
    let rank = kept.len();
    let basis = if rank == 0 { CMatrix::zeros(rows, 0) } else { CMatrix::from_columns(&kept) };
    Ok(Orthonormalized { basis, rank, condition: smax / smin })
}

/// Orthogonal projection onto a truncated ideal.
#[derive(Clone, Debug)]
pub struct Projection {
    pub op: OperatorMatrix,
    pub rank: usize,
    pub condition: f64,
}

/// Coordinates of every `z^α f` with total degree `≤ D`, one per column.
pub fn ideal_products(gens: &[Polynomial], basis: &TruncationBasis) -> Result<CMatrix> {
    let d = basis.space().d();
    let mut cols = Vec::new();
    for (index, f) in gens.iter().enumerate() {
        if f.is_zero() {
            return Err(Error::ZeroGenerator { index });
        }
        let deg = f.total_degree().expect("nonzero") as u32;
        if deg > basis.max_degree() {
            continue;
        }
        for k in 0..=basis.max_degree() - deg {
            for a in Monomial::all_of_total_degree(d, k) {
                cols.push(basis.coords(&f.mul_term(&Term::new(GaussianRational::one(), a)))?);
            }
        }
    }
    Ok(if cols.is_empty() { CMatrix::zeros(basis.len(), 0) } else { CMatrix::from_columns(&cols) })
}

/// `P_N` for `N = span{z^α f_i}` inside the degree-`≤ D` truncation.
pub fn ideal_projection(gens: &[Polynomial], sp: &SpaceParams, max_degree: u32) -> Result<Projection> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let basis = TruncationBasis::new(sp, max_degree);
    let on = orthonormalize(&ideal_products(gens, &basis)?)?;
    let matrix = &on.basis * on.basis.adjoint();
    Ok(Projection {
        op: OperatorMatrix { matrix, domain: basis.clone(), codomain: basis },
        rank: on.rank,
        condition: on.condition,
    })
}

/// `[S_i, S_j^*] = S_i S_j^* − S_j^* S_i` on the degree-`≤ D` truncation.
/// The commutator preserves degree, so this block is exact.
pub fn cross_commutator(i: usize, j: usize, sp: &SpaceParams, max_degree: u32) -> Result<OperatorMatrix> {
    let si = mult_op(i, sp, max_degree)?;
    let sj = mult_op(j, sp, max_degree)?;
    let sj_adj = sj.matrix.adjoint();
    let n = si.domain.len();
    // S_j^*: ≤D → ≤D−1 ⊂ ≤D, then S_i back up
    let lower = sj_adj.view((0, 0), (n, n)).into_owned();
    let si_sq = si.matrix.view((0, 0), (n, n)).into_owned();
    let matrix = &si_sq * &lower - &sj_adj * &si.matrix;
    Ok(OperatorMatrix { matrix, domain: si.domain.clone(), codomain: si.domain })
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("Schatten exponent must be >= 1, got {p}")));
    }
    Ok(())
}

/// Singular values, largest first, from the real SVD of
/// `[[Re A, −Im A], [Im A, Re A]]`, which lists each one twice.
///
/// nalgebra's complex SVD misplaces repeated singular values of
/// rank-deficient inputs, which is exactly what ideal compressions produce.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    let (r, c) = a.shape();
    if r == 0 || c == 0 {
        return Vec::new();
    }
    let real = DMatrix::<f64>::from_fn(2 * r, 2 * c, |i, j| {
        let z = a[(i % r, j % c)];
        match (i < r, j < c) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let mut s: Vec<f64> = real.singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s.into_iter().step_by(2).collect()
}

/// `(Σ σ^p)^{1/p}` from the singular values.
pub fn schatten_norm(a: &CMatrix, p: f64) -> Result<f64> {
    check_p(p)?;
    if a.is_empty() {
        return Ok(0.0);
    }
    let s = singular_values(a);
    Ok(s.iter().map(|x| x.powf(p)).sum::<f64>().powf(1.0 / p))
}

/// Same norm through the eigenvalues of `A^*A`: `(tr |A|^p)^{1/p}`.
pub fn schatten_norm_eigen(a: &CMatrix, p: f64) -> Result<f64> {
    check_p(p)?;
    if a.is_empty() {
        return Ok(0.0);
    }
    let g = a.adjoint() * a;
    let e = g.symmetric_eigenvalues();
    Ok(e.iter().map(|l| l.max(0.0).powf(p / 2.0)).sum::<f64>().powf(1.0 / p))
}

pub fn operator_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    singular_values(a).first().copied().unwrap_or(0.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub max_degree: u32,
    pub j: usize,
    pub value: f64,
    /// Change from the previous truncation for the same `j`.
    pub increment: Option<f64>,
    /// Schatten norm of the part touching the top degree, left out of `value`.
    pub boundary: f64,
    pub projection_rank: usize,
    pub condition: f64,
}

/// `‖P_N^⊥ S_j^* P_N‖` in the Schatten `2p` norm for each truncation and
/// each `j`, evaluated on the degrees `≤ D − 1`.
pub fn essential_normality_scan(
    gens: &[Polynomial],
    sp: &SpaceParams,
    p: f64,
    degrees: &[u32],
) -> Result<Vec<ScanRow>> {
    check_p(p)?;
    if degrees.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("truncation degrees must increase".into()));
    }
    let max_gen = gens.iter().filter_map(Polynomial::total_degree).max().unwrap_or(0);
    let d = sp.d();
    let mut rows: Vec<ScanRow> = Vec::new();
    for &big_d in degrees {
        if u64::from(big_d) <= max_gen {
            return Err(Error::InvalidArgument(format!(
                "truncation degree {big_d} does not exceed generator degree {max_gen}"
            )));
        }
        let proj = ideal_projection(gens, sp, big_d)?;
        let pm = &proj.op.matrix;
        let perp = CMatrix::identity(pm.nrows(), pm.ncols()) - pm;
        let interior = proj.op.domain.prefix_len(big_d - 1);
        for j in 1..=d {
            let sj_adj = mult_op_square(j, sp, big_d)?.matrix.adjoint();
            let m = &perp * sj_adj * pm;
            let inner = m.view((0, 0), (interior, interior)).into_owned();
            let value = schatten_norm(&inner, 2.0 * p)?;
            let full = schatten_norm(&m, 2.0 * p)?;
            let boundary = (full.powf(2.0 * p) - value.powf(2.0 * p)).max(0.0).powf(1.0 / (2.0 * p));
            let increment = rows.iter().rev().find(|r| r.j == j).map(|r| value - r.value);
            rows.push(ScanRow {
                max_degree: big_d,
                j,
                value,
                increment,
                boundary,
                projection_rank: proj.rank,
                condition: proj.condition,
            });
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeRow {
    pub sample: usize,
    pub j: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FangXiaProbe {
    pub rows: Vec<ProbeRow>,
    /// Largest observed `lhs/rhs`, an empirical constant `K`.
    pub max_ratio: f64,
}

/// Random `g` of degree `≤ D − deg f` with Gaussian-integer coefficients in
/// `[−9, 9] + i[−9, 9]`.
pub fn random_polynomial(d: usize, max_degree: u32, rng: &mut impl Rng) -> Polynomial {
    let terms = (0..=max_degree).flat_map(|k| Monomial::all_of_total_degree(d, k)).map(|m| {
        let c = GaussianRational::new(
            Rational::from_integer(rng.random_range(-9i64..=9).into()),
            Rational::from_integer(rng.random_range(-9i64..=9).into()),
        );
        (c, m)
    });
    Polynomial::from_terms(d, terms).expect("dimension matches")
}

/// `‖Q S_j^* g f‖_t` against `‖g f‖_{t+1}`, with `Q` the complement of the
/// truncated principal ideal `⟨f⟩`.
pub fn fang_xia_probe(
    f: &Polynomial,
    sp: &SpaceParams,
    max_degree: u32,
    samples: usize,
    seed: u64,
) -> Result<FangXiaProbe> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("probe generator"));
    }
    let deg_f = f.total_degree().expect("nonzero") as u32;
    if deg_f >= max_degree {
        return Err(Error::InvalidArgument(format!("truncation {max_degree} too small for degree {deg_f}")));
    }
    let proj = ideal_projection(std::slice::from_ref(f), sp, max_degree)?;
    let basis = &proj.op.domain;
    let q = CMatrix::identity(basis.len(), basis.len()) - &proj.op.matrix;
    let up = sp.shifted_up();
    let adjoints: Vec<CMatrix> =
        (1..=sp.d()).map(|j| Ok(mult_op_square(j, sp, max_degree)?.matrix.adjoint())).collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for sample in 0..samples {
        let g = random_polynomial(sp.d(), max_degree - deg_f, &mut rng);
        let gf = g.checked_mul(f)?;
        let v = basis.coords(&gf)?;
        let rhs = poly_norm_sq(&gf, &up)?.to_f64().expect("finite").sqrt();
        for (j, adj) in adjoints.iter().enumerate() {
            let lhs = (&q * (adj * &v)).norm();
            let ratio = if rhs > 0.0 { lhs / rhs } else { 0.0 };
            rows.push(ProbeRow { sample, j: j + 1, lhs, rhs, ratio });
        }
    }
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(FangXiaProbe { rows, max_ratio })
}

#[derive(Clone, Debug, Serialize)]
pub struct AngleReport {
    /// `sup |⟨v, x⟩|` over unit `x` in the current subspace, one per added
    /// direction.
    pub cosines: Vec<f64>,
    /// Bound on `T` restricted to `M`.
    pub restricted_norm: f64,
    /// Final constant `K` with `‖T(m+n)‖ ≤ K‖m+n‖`.
    pub bound: f64,
    pub samples: usize,
    pub violations: usize,
    pub intermediate_violations: usize,
    pub worst_ratio: f64,
}

/// Checks the bound `‖T(m+n)‖ ≤ C√2(1−c)^{−1/2}‖m+n‖` for `m ∈ M`,
/// `n ∈ N`, adding the columns of `n_basis` one direction at a time.
pub fn angle_bound_check(
    m_basis: &CMatrix,
    n_basis: &CMatrix,
    t: &CMatrix,
    samples: usize,
    seed: u64,
) -> Result<AngleReport> {
    let dim = m_basis.nrows();
    if n_basis.nrows() != dim || t.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: n_basis.nrows().max(t.ncols()) });
    }
    let mut q = orthonormalize(m_basis)?.basis;
    let restricted_norm = operator_norm(&(t * &q));
    let mut bound = restricted_norm;
    let mut cosines = Vec::new();
    let mut steps: Vec<(CMatrix, CVector, f64)> = Vec::new();
    for col in n_basis.column_iter() {
        let n = col.norm();
        if n == 0.0 {
            continue;
        }
        let v: CVector = col.unscale(n);
        let c = (&q * (q.adjoint() * &v)).norm();
        if c >= 1.0 - 1e-8 {
            return Err(Error::Numerical(format!("direction lies in the closure of M (cosine {c})")));
        }
        let cstep = bound.max((t * &v).norm());
        steps.push((q.clone(), v.clone(), c));
        bound = cstep * std::f64::consts::SQRT_2 / (1.0 - c).sqrt();
        cosines.push(c);
        let mut cols: Vec<CVector> = q.column_iter().map(|x| x.into_owned()).collect();
        let resid = &v - &q * (q.adjoint() * &v);
        cols.push(resid.unscale(resid.norm()));
        q = CMatrix::from_columns(&cols);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gauss = |k: usize| -> CVector {
        CVector::from_fn(k, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
    };
    let (mut violations, mut intermediate_violations, mut worst_ratio) = (0, 0, 0.0f64);
    for s in 0..samples {
        // the intermediate inequality is checked at a step chosen round-robin
        if let Some((qs, v, c)) = steps.get(s % steps.len().max(1)) {
            let m = qs * gauss(qs.ncols());
            let n = v * gauss(1)[0];
            let lhs = (&m + &n).norm_squared();
            let rhs = (1.0 - c) * (m.norm_squared() + n.norm_squared());
            if lhs < rhs * (1.0 - 1e-9) {
                intermediate_violations += 1;
            }
        }
        let m = m_basis * gauss(m_basis.ncols());
        let n = n_basis * gauss(n_basis.ncols());
        let x = m + n;
        let xn = x.norm();
        if xn == 0.0 {
            continue;
        }
        let ratio = (t * &x).norm() / xn;
        worst_ratio = worst_ratio.max(if bound > 0.0 { ratio / bound } else { ratio });
        if ratio > bound * (1.0 + 1e-9) {
            violations += 1;
        }
    }
    Ok(AngleReport { cosines, restricted_norm, bound, samples, violations, intermediate_violations, worst_ratio })
}

/// A random test instance for [`angle_bound_check`]: an `m_dim`-dimensional
/// subspace `M` of `C^ambient`, a unit vector `v` with `‖P_M v‖ = cosine`,
/// and a random `T` scaled to operator norm `norm_bound`.
#[derive(Clone, Debug)]
pub struct AngleInstance {
    pub m_basis: CMatrix,
    pub v: CMatrix,
    pub t: CMatrix,
}

pub fn random_angle_instance(
    ambient: usize,
    m_dim: usize,
    cosine: f64,
    norm_bound: f64,
    rng: &mut impl Rng,
) -> Result<AngleInstance> {
    if m_dim == 0 || m_dim >= ambient {
        return Err(Error::InvalidArgument(format!("need 0 < dim M < {ambient}, got {m_dim}")));
    }
    if !(0.0..1.0).contains(&cosine) {
        return Err(Error::InvalidArgument(format!("cosine must lie in [0, 1), got {cosine}")));
    }
    let mut gauss = |r: usize, c: usize| {
        CMatrix::from_fn(r, c, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
    };
    let q = orthonormalize(&gauss(ambient, m_dim))?.basis;
    let inside = &q * gauss(m_dim, 1);
    let inside = inside.unscale(inside.norm());
    let raw = gauss(ambient, 1);
    let outside = &raw - &q * (q.adjoint() * &raw);
    let outside = outside.unscale(outside.norm());
    let v = inside * Complex64::from(cosine) + outside * Complex64::from((1.0 - cosine * cosine).sqrt());
    let t = gauss(ambient, ambient);
    let t = t.unscale(operator_norm(&t) / norm_bound);
    Ok(AngleInstance { m_basis: q, v, t })
}
