//! Greatest common divisors in `Q(i)[x, y]`.
//!
//! Polynomials are viewed in `y` over `Q(i)[x]`; contents are handled with a
//! univariate Euclidean gcd and the primitive parts with a primitive
//! pseudo-remainder sequence.

use crate::poly::{GaussianRational, Monomial, Polynomial, WeightedOrder};
use crate::{Error, Result};

/// Dense univariate polynomial, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Uni(Vec<GaussianRational>);

impl Uni {
    fn zero() -> Self {
        Uni(Vec::new())
    }

    fn one() -> Self {
        Uni(vec![GaussianRational::one()])
    }

    fn trimmed(mut v: Vec<GaussianRational>) -> Self {
        while v.last().is_some_and(GaussianRational::is_zero) {
            v.pop();
        }
        Uni(v)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn lead(&self) -> &GaussianRational {
        self.0.last().expect("nonzero")
    }

    fn is_constant(&self) -> bool {
        self.0.len() == 1
    }

    fn add(&self, o: &Uni) -> Uni {
        let n = self.0.len().max(o.0.len());
        let z = GaussianRational::zero();
        Uni::trimmed((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect())
    }

    fn neg(&self) -> Uni {
        Uni(self.0.iter().map(|c| -c).collect())
    }

    fn sub(&self, o: &Uni) -> Uni {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Uni) -> Uni {
        if self.is_zero() || o.is_zero() {
            return Uni::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Uni::trimmed(out)
    }

    fn scale(&self, c: &GaussianRational) -> Uni {
        Uni::trimmed(self.0.iter().map(|a| a * c).collect())
    }

    fn monic(&self) -> Uni {
        if self.is_zero() {
            return Uni::zero();
        }
        self.scale(&self.lead().inv().expect("nonzero lead"))
    }

    fn div_rem(&self, d: &Uni) -> (Uni, Uni) {
        let inv = d.lead().inv().expect("nonzero divisor");
        let mut r = self.0.clone();
        let mut q = vec![GaussianRational::zero(); self.0.len().saturating_sub(d.0.len()) + 1];
        while r.len() >= d.0.len() && !r.is_empty() {
            let shift = r.len() - d.0.len();
            let c = r.last().expect("nonempty") * &inv;
            for (i, b) in d.0.iter().enumerate() {
                r[shift + i] -= &(&c * b);
            }
            q[shift] = c;
            r.pop();
            while r.last().is_some_and(GaussianRational::is_zero) {
                r.pop();
            }
        }
        (Uni::trimmed(q), Uni::trimmed(r))
    }

    fn exact_div(&self, d: &Uni) -> Uni {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact univariate division");
        q
    }

    fn gcd(a: &Uni, b: &Uni) -> Uni {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// Polynomial in `y` with coefficients in `Q(i)[x]`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Bi(Vec<Uni>);

impl Bi {
    fn from_poly(p: &Polynomial) -> Bi {
        let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
        for (m, c) in p.terms() {
            let (ex, ey) = (m.exponents()[0] as usize, m.exponents()[1] as usize);
            if rows.len() <= ey {
                rows.resize(ey + 1, Vec::new());
            }
            if rows[ey].len() <= ex {
                rows[ey].resize(ex + 1, GaussianRational::zero());
            }
            rows[ey][ex] = c.clone();
        }
        Bi::trimmed(rows.into_iter().map(Uni::trimmed).collect())
    }

    fn to_poly(&self) -> Polynomial {
        let terms = self.0.iter().enumerate().flat_map(|(ey, row)| {
            row.0.iter().enumerate().map(move |(ex, c)| (c.clone(), Monomial::new(vec![ex as u32, ey as u32])))
        });
        Polynomial::from_terms(2, terms).expect("two variables")
    }

    fn trimmed(mut v: Vec<Uni>) -> Bi {
        while v.last().is_some_and(Uni::is_zero) {
            v.pop();
        }
        Bi(v)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &Uni {
        self.0.last().expect("nonzero")
    }

    fn content(&self) -> Uni {
        self.0.iter().fold(Uni::zero(), |acc, c| if acc.is_zero() { c.monic() } else { Uni::gcd(&acc, c) })
    }

    fn primitive_part(&self) -> Bi {
        let c = self.content();
        Bi(self.0.iter().map(|u| u.exact_div(&c)).collect())
    }

    fn scale(&self, u: &Uni) -> Bi {
        Bi::trimmed(self.0.iter().map(|c| c.mul(u)).collect())
    }

    /// Pseudo-remainder of `self` by `d` in `y`.
    fn prem(&self, d: &Bi) -> Bi {
        let mut r = self.clone();
        let lc = d.lead().clone();
        while !r.is_zero() && r.degree() >= d.degree() {
            let shift = r.degree() - d.degree();
            let lr = r.lead().clone();
            let mut next = r.scale(&lc).0;
            for (i, c) in d.0.iter().enumerate() {
                next[shift + i] = next[shift + i].sub(&c.mul(&lr));
            }
            r = Bi::trimmed(next);
        }
        r
    }
}

fn gcd_pair(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let (ba, bb) = (Bi::from_poly(a), Bi::from_poly(b));
    let content = Uni::gcd(&ba.content(), &bb.content());
    let (mut p, mut q) = (ba.primitive_part(), bb.primitive_part());
    if p.degree() < q.degree() {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        let r = p.prem(&q);
        p = q;
        q = if r.is_zero() { r } else { r.primitive_part() };
    }
    let g = if p.0.len() == 1 && p.0[0].is_constant() { Bi(vec![Uni::one()]) } else { p.primitive_part() };
    g.scale(&content).to_poly()
}

/// `gcd(g_1, …, g_k)`, normalised to leading coefficient 1 under the graded
/// order.
pub fn ideal_gcd(gens: &[Polynomial]) -> Result<Polynomial> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    for (index, g) in gens.iter().enumerate() {
        if g.dim() != 2 {
            return Err(Error::Unsupported(format!("gcd needs two variables, generator {index} has {}", g.dim())));
        }
        if g.is_zero() {
            return Err(Error::ZeroGenerator { index });
        }
    }
    let g = gens.iter().skip(1).fold(gens[0].clone(), |acc, f| gcd_pair(&acc, f));
    g.monic(&WeightedOrder::graded(2))
}

/// Exact quotient `a / b`, or `None` if `b` does not divide `a`.
pub fn exact_quotient(a: &Polynomial, b: &Polynomial, ord: &WeightedOrder) -> Result<Option<Polynomial>> {
    let res = crate::division::divide(a, std::slice::from_ref(b), ord)?;
    Ok(res.remainder.is_zero().then(|| res.quotients.into_iter().next().expect("one quotient")))
}
