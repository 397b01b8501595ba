//! Buchberger's algorithm under a weighted order, membership, degree
//! equalisation, staircases and the gcd factorisation `I = p·J`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::division::divide;
use crate::gcd::{exact_quotient, ideal_gcd};
use crate::poly::{Monomial, Polynomial, Term, WeightedOrder};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    generators: Vec<Polynomial>,
    order: WeightedOrder,
    reduced: bool,
}

/// Codimension of a monomial ideal, i.e. the size of its staircase.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Codimension {
    Finite(u64),
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BeurlingForm {
    pub gcd_part: Polynomial,
    pub cofactor_ideal: Vec<Polynomial>,
    pub codimension: Codimension,
}

impl fmt::Display for Codimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Codimension::Finite(n) => write!(f, "{n}"),
            Codimension::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Codimension {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Codimension::Finite(n) => s.serialize_u64(*n),
            Codimension::Infinite => s.serialize_str("infinite"),
        }
    }
}

fn lead_monomial(p: &Polynomial, ord: &WeightedOrder) -> Result<Monomial> {
    p.leading_term(ord).map(|t| t.monomial)
}

/// `(L/LT(f))·f − (L/LT(g))·g` with `L = lcm(LM(f), LM(g))`.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, ord: &WeightedOrder) -> Result<Polynomial> {
    let lf = f.leading_term(ord)?;
    let lg = g.leading_term(ord)?;
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: g.dim() });
    }
    let l = Term::new(crate::GaussianRational::one(), lf.monomial.lcm(&lg.monomial));
    let a = lf.quotient_of(&l)?;
    let b = lg.quotient_of(&l)?;
    Ok(&f.mul_term(&a) - &g.mul_term(&b))
}

/// Remainder of `p` against `basis`, taking the first generator whose
/// leading monomial divides. Unlike [`divide`] this tolerates repeated
/// leading monomials, which occur while the basis is being built.
fn normal_form(p: &Polynomial, basis: &[(Polynomial, Term)], ord: &WeightedOrder) -> Polynomial {
    let mut p = p.clone();
    let mut r = Polynomial::zero(p.dim());
    while let Some((m, c)) = p.leading_entry(ord) {
        let lt = Term::new(c.clone(), m.clone());
        match basis.iter().find(|(_, l)| l.divides(&lt)) {
            Some((g, l)) => {
                let q = l.quotient_of(&lt).expect("divisibility checked");
                p.sub_term_multiple(&q, g);
            }
            None => {
                p.remove(&lt.monomial);
                r.add_term(lt.coeff, lt.monomial);
            }
        }
    }
    r
}

/// Buchberger's algorithm with the normal selection strategy (smallest lcm
/// first) and the coprime criterion. The result is a minimal basis:
/// elements whose leading monomial is divisible by another's are dropped.
pub fn buchberger(gens: &[Polynomial], ord: &WeightedOrder) -> Result<GroebnerBasis> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let mut basis: Vec<(Polynomial, Term)> = Vec::with_capacity(gens.len());
    for (index, g) in gens.iter().enumerate() {
        if g.is_zero() {
            return Err(Error::ZeroGenerator { index });
        }
        if g.dim() != ord.dim() {
            return Err(Error::DimensionMismatch { expected: ord.dim(), found: g.dim() });
        }
        basis.push((g.clone(), g.leading_term(ord)?));
    }

    let mut pairs: Vec<(usize, usize, Monomial)> = Vec::new();
    let push_pairs = |pairs: &mut Vec<(usize, usize, Monomial)>, basis: &[(Polynomial, Term)], j: usize| {
        for i in 0..j {
            let (a, b) = (&basis[i].1.monomial, &basis[j].1.monomial);
            if !a.is_coprime(b) {
                pairs.push((i, j, a.lcm(b)));
            }
        }
    };
    for j in 1..basis.len() {
        push_pairs(&mut pairs, &basis, j);
    }

    while !pairs.is_empty() {
        let pick = (0..pairs.len())
            .min_by(|&a, &b| {
                ord.compare(&pairs[a].2, &pairs[b].2)
                    .then((pairs[a].0, pairs[a].1).cmp(&(pairs[b].0, pairs[b].1)))
            })
            .expect("nonempty");
        let (i, j, _) = pairs.swap_remove(pick);
        let s = s_polynomial(&basis[i].0, &basis[j].0, ord)?;
        let r = normal_form(&s, &basis, ord);
        if !r.is_zero() {
            let r = r.monic(ord)?;
            let lt = r.leading_term(ord)?;
            basis.push((r, lt));
            push_pairs(&mut pairs, &basis, basis.len() - 1);
        }
    }

    Ok(GroebnerBasis { generators: minimalise(basis), order: ord.clone(), reduced: false })
}

fn minimalise(basis: Vec<(Polynomial, Term)>) -> Vec<Polynomial> {
    let keep: Vec<bool> = (0..basis.len())
        .map(|i| {
            let mi = &basis[i].1.monomial;
            !basis.iter().enumerate().any(|(j, (_, l))| {
                j != i && l.monomial.divides(mi) && (l.monomial != *mi || j < i)
            })
        })
        .collect();
    basis.into_iter().zip(keep).filter(|(_, k)| *k).map(|((g, _), _)| g).collect()
}

impl GroebnerBasis {
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> &WeightedOrder {
        &self.order
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators.iter().map(|g| lead_monomial(g, &self.order).expect("nonzero generator")).collect()
    }

    /// The reduced basis: monic, each generator fully reduced against the
    /// others, sorted by decreasing leading monomial.
    pub fn reduce(&self) -> GroebnerBasis {
        let ord = &self.order;
        let mut gens: Vec<Polynomial> =
            self.generators.iter().map(|g| g.monic(ord).expect("nonzero generator")).collect();
        for i in 0..gens.len() {
            let others: Vec<(Polynomial, Term)> = gens
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| (g.clone(), g.leading_term(ord).expect("nonzero")))
                .collect();
            let lt = gens[i].leading_term(ord).expect("nonzero");
            let mut tail = gens[i].clone();
            tail.remove(&lt.monomial);
            let mut g = normal_form(&tail, &others, ord);
            g.add_term(lt.coeff, lt.monomial);
            gens[i] = g;
        }
        gens.sort_by(|a, b| {
            ord.compare(b.leading_monomial(ord).expect("nonzero"), a.leading_monomial(ord).expect("nonzero"))
        });
        GroebnerBasis { generators: gens, order: ord.clone(), reduced: true }
    }

    /// Re-checks the defining property: every S-polynomial divides to zero.
    pub fn verify(&self) -> Result<bool> {
        for i in 0..self.generators.len() {
            for j in i + 1..self.generators.len() {
                let s = s_polynomial(&self.generators[i], &self.generators[j], &self.order)?;
                if !divide(&s, &self.generators, &self.order)?.remainder.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn staircase_codimension(&self) -> Codimension {
        staircase_codimension(self)
    }
}

/// `h ∈ I` iff dividing by the Groebner basis leaves no remainder.
pub fn is_member(h: &Polynomial, gb: &GroebnerBasis) -> Result<bool> {
    Ok(divide(h, &gb.generators, &gb.order)?.remainder.is_zero())
}

/// Buchberger on quasi-homogeneous generators; every output element is
/// checked to be quasi-homogeneous again.
pub fn quasi_homogeneous_basis(gens: &[Polynomial], ord: &WeightedOrder) -> Result<GroebnerBasis> {
    for (index, g) in gens.iter().enumerate() {
        if g.is_zero() {
            return Err(Error::ZeroGenerator { index });
        }
        if !g.is_quasi_homogeneous(ord) {
            return Err(Error::NotQuasiHomogeneous { index });
        }
    }
    let gb = buchberger(gens, ord)?;
    if let Some(index) = gb.generators.iter().position(|g| !g.is_quasi_homogeneous(ord)) {
        return Err(Error::Numerical(format!(
            "basis element {index} lost quasi-homogeneity; the order is not weight-compatible"
        )));
    }
    Ok(gb)
}

/// `{z^β g : g ∈ gb, deg(z^β g) = m}`, deduplicated in generation order.
pub fn equalize_degrees(gb: &GroebnerBasis, m: u64) -> Result<Vec<Polynomial>> {
    let ord = &gb.order;
    let mut out: Vec<Polynomial> = Vec::new();
    for (index, g) in gb.generators.iter().enumerate() {
        let degree = g.quasi_degree(ord).ok_or(Error::NotQuasiHomogeneous { index })?;
        if degree > m {
            return Err(Error::UnreachableDegree { index, degree, target: m });
        }
        let betas = Monomial::all_of_weighted_degree(ord.weights(), m - degree);
        if betas.is_empty() {
            return Err(Error::UnreachableDegree { index, degree, target: m });
        }
        for beta in betas {
            let p = g.mul_term(&Term::new(crate::GaussianRational::one(), beta));
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Echelon form of `polys` under the monomial order: same span, pairwise
/// distinct leading monomials, monic, sorted by decreasing leading monomial.
pub fn echelon(polys: &[Polynomial], ord: &WeightedOrder) -> Result<Vec<Polynomial>> {
    let mut rows: Vec<(Polynomial, Monomial)> = Vec::new();
    for p in polys {
        let mut p = p.clone();
        while let Some(lm) = p.leading_monomial(ord).cloned() {
            match rows.iter().find(|(_, m)| *m == lm) {
                Some((row, _)) => {
                    let t = Term::new(p.coeff(&lm), Monomial::one(p.dim()));
                    p.sub_term_multiple(&t, row);
                }
                None => {
                    rows.push((p.monic(ord)?, lm));
                    break;
                }
            }
        }
    }
    rows.sort_by(|a, b| ord.compare(&b.1, &a.1));
    Ok(rows.into_iter().map(|(p, _)| p).collect())
}

/// [`equalize_degrees`] followed by [`echelon`], so the result can be
/// passed to the division algorithm.
pub fn equalized_basis(gb: &GroebnerBasis, m: u64) -> Result<Vec<Polynomial>> {
    echelon(&equalize_degrees(gb, m)?, &gb.order)
}

/// Smallest `m` at or above `max deg + g·F` (with `g` the gcd of the weights
/// and `F` the conductor of the reduced weight semigroup) such that every
/// generator can be lifted to degree `m`.
pub fn default_equalization_degree(gb: &GroebnerBasis) -> Result<u64> {
    let ord = &gb.order;
    let degrees: Vec<u64> = gb
        .generators
        .iter()
        .enumerate()
        .map(|(index, g)| g.quasi_degree(ord).ok_or(Error::NotQuasiHomogeneous { index }))
        .collect::<Result<_>>()?;
    let w: Vec<u64> = ord.weights().iter().map(|&w| u64::from(w)).collect();
    let g = w.iter().copied().fold(0, num_integer::gcd);
    if let Some(bad) = degrees.iter().position(|d| d % g != degrees[0] % g) {
        return Err(Error::UnreachableDegree { index: bad, degree: degrees[bad], target: degrees[0] });
    }
    let reduced: Vec<u64> = w.iter().map(|x| x / g).collect();
    let max = *degrees.iter().max().expect("nonempty basis");
    let mut m = max + g * conductor(&reduced);
    while m % g != degrees[0] % g {
        m += 1;
    }
    Ok(m)
}

/// Least `c` such that every integer `≥ c` is a non-negative combination of
/// the (coprime) weights. Two weights use the closed form.
pub fn conductor(weights: &[u64]) -> u64 {
    if weights.contains(&1) {
        return 0;
    }
    if let [a, b] = weights {
        return a * b - a - b + 1;
    }
    let min = *weights.iter().min().expect("nonempty");
    let mut reachable = vec![true];
    let mut run = 0;
    let mut n = 0usize;
    while run < min {
        n += 1;
        let ok = weights.iter().any(|&w| w as usize <= n && reachable[n - w as usize]);
        reachable.push(ok);
        run = if ok { run + 1 } else { 0 };
    }
    (n + 1 - min as usize) as u64
}

/// Monomials outside the leading-term ideal, or `None` when there are
/// infinitely many.
pub fn staircase(gb: &GroebnerBasis) -> Option<Vec<Monomial>> {
    let leads = gb.leading_monomials();
    let dim = gb.order.dim();
    if leads.iter().any(Monomial::is_one) {
        return Some(Vec::new());
    }
    let mut bounds = Vec::with_capacity(dim);
    for v in 0..dim {
        let pure = leads
            .iter()
            .filter(|m| m.exponents().iter().enumerate().all(|(i, &e)| i == v || e == 0))
            .map(|m| m.exponents()[v])
            .min()?;
        bounds.push(pure);
    }
    let mut out = Vec::new();
    let mut e = vec![0u32; dim];
    loop {
        let m = Monomial::new(e.clone());
        if !leads.iter().any(|l| l.divides(&m)) {
            out.push(m);
        }
        let mut k = 0;
        loop {
            if k == dim {
                return Some(out);
            }
            e[k] += 1;
            if e[k] < bounds[k] {
                break;
            }
            e[k] = 0;
            k += 1;
        }
    }
}

pub fn staircase_codimension(gb: &GroebnerBasis) -> Codimension {
    match staircase(gb) {
        Some(s) => Codimension::Finite(s.len() as u64),
        None => Codimension::Infinite,
    }
}

/// `I = p·J` with `p = gcd(I)`; the codimension is that of `J`.
pub fn beurling_form(gens: &[Polynomial], ord: &WeightedOrder) -> Result<BeurlingForm> {
    let p = ideal_gcd(gens)?;
    let cofactor_ideal = gens
        .iter()
        .map(|g| exact_quotient(g, &p, ord)?.ok_or(Error::NotDivisible))
        .collect::<Result<Vec<_>>>()?;
    let codimension = buchberger(&cofactor_ideal, ord)?.staircase_codimension();
    Ok(BeurlingForm { gcd_part: p, cofactor_ideal, codimension })
}

impl PartialOrd for Codimension {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Codimension {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Codimension::Finite(a), Codimension::Finite(b)) => a.cmp(b),
            (Codimension::Finite(_), Codimension::Infinite) => Ordering::Less,
            (Codimension::Infinite, Codimension::Finite(_)) => Ordering::Greater,
            (Codimension::Infinite, Codimension::Infinite) => Ordering::Equal,
        }
    }
}
