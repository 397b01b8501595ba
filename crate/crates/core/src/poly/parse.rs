//! Text form of polynomials.
//!
//! ```text
//! poly    := [sign] term (sign term)*
//! term    := factor ('*' factor)*
//! factor  := rational | complex | var ['^' int]
//! complex := '(' [sign] part (sign part)* ')'     part := rational ['i'] | 'i'
//! var     := 'x' | 'y'            (two variables)
//!          | 'z' int              (z1 .. zd)
//! vector  := '(' poly (',' poly)* ')'
//! ```
//!
//! Whitespace is ignored.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{GaussianRational, Monomial, Polynomial, VectorPolynomial, WeightedOrder};
use crate::{Error, Rational, Result};

/// Either a scalar or a vector-valued polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Scalar(Polynomial),
    Vector(VectorPolynomial),
}

pub fn parse_polynomial(text: &str, dim: usize) -> Result<Polynomial> {
    let mut p = Parser::new(text, dim);
    let poly = p.poly()?;
    p.expect_end()?;
    Ok(poly)
}

pub fn parse_vector(text: &str, dim: usize) -> Result<VectorPolynomial> {
    let mut p = Parser::new(text, dim);
    let v = p.vector()?;
    p.expect_end()?;
    Ok(v)
}

/// Parses a vector when the text is a parenthesised, comma-separated list,
/// and a scalar polynomial otherwise.
pub fn parse(text: &str, dim: usize) -> Result<Parsed> {
    if has_top_level_comma(text) {
        parse_vector(text, dim).map(Parsed::Vector)
    } else {
        parse_polynomial(text, dim).map(Parsed::Scalar)
    }
}

fn has_top_level_comma(text: &str) -> bool {
    let mut depth = 0i32;
    for c in text.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 1 => return true,
            _ => {}
        }
    }
    false
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    dim: usize,
}

impl Parser {
    fn new(text: &str, dim: usize) -> Self {
        Self { chars: text.chars().collect(), pos: 0, dim }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { position: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("unexpected '{c}'")),
        }
    }

    fn vector(&mut self) -> Result<VectorPolynomial> {
        if !self.eat('(') {
            return self.err("expected '(' to open a vector polynomial");
        }
        let mut comps = vec![self.poly()?];
        while self.eat(',') {
            comps.push(self.poly()?);
        }
        if !self.eat(')') {
            return self.err("expected ',' or ')'");
        }
        VectorPolynomial::new(comps)
    }

    fn poly(&mut self) -> Result<Polynomial> {
        let mut out = Polynomial::zero(self.dim);
        let mut sign = self.sign();
        loop {
            let (c, m) = self.term()?;
            out.add_term(if sign { -c } else { c }, m);
            match self.peek() {
                Some('+') | Some('-') => sign = self.sign(),
                _ => break,
            }
        }
        Ok(out)
    }

    /// Consumes any run of `+`/`-`; returns true for an odd number of minuses.
    fn sign(&mut self) -> bool {
        let mut neg = false;
        loop {
            match self.peek() {
                Some('+') => self.pos += 1,
                Some('-') => {
                    neg = !neg;
                    self.pos += 1
                }
                _ => return neg,
            }
        }
    }

    fn term(&mut self) -> Result<(GaussianRational, Monomial)> {
        let mut coeff = GaussianRational::one();
        let mut exps = vec![0u32; self.dim];
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => coeff = &coeff * &GaussianRational::from_real(self.rational()?),
                Some('(') => coeff = &coeff * &self.complex()?,
                Some(c) if c.is_ascii_alphabetic() => {
                    let (var, e) = self.var_power()?;
                    exps[var] = exps[var]
                        .checked_add(e)
                        .ok_or(Error::Parse { position: self.pos, message: "exponent overflow".into() })?;
                }
                Some(c) => return self.err(format!("expected a coefficient or variable, found '{c}'")),
                None => return self.err("unexpected end of input"),
            }
            if !self.eat('*') {
                break;
            }
        }
        Ok((coeff, Monomial::new(exps)))
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("ascii digits"))
    }

    fn rational(&mut self) -> Result<Rational> {
        let num = self.integer()?;
        if self.eat('/') {
            let at = self.pos;
            let den = self.integer()?;
            if den.is_zero() {
                return Err(Error::Parse { position: at, message: "zero denominator".into() });
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }

    fn complex(&mut self) -> Result<GaussianRational> {
        self.eat('(');
        let mut re = Rational::zero();
        let mut im = Rational::zero();
        let mut neg = self.sign();
        loop {
            let (value, imaginary) = match self.peek() {
                Some('i') => {
                    self.pos += 1;
                    (Rational::one(), true)
                }
                Some(c) if c.is_ascii_digit() => {
                    let v = self.rational()?;
                    let imaginary = self.eat('i');
                    (v, imaginary)
                }
                _ => return self.err("expected a rational or 'i' inside a complex coefficient"),
            };
            let value = if neg { -value } else { value };
            if imaginary {
                im += value;
            } else {
                re += value;
            }
            match self.peek() {
                Some('+') | Some('-') => neg = self.sign(),
                Some(')') => {
                    self.pos += 1;
                    return Ok(GaussianRational::new(re, im));
                }
                _ => return self.err("expected '+', '-' or ')' in complex coefficient"),
            }
        }
    }

    fn var_power(&mut self) -> Result<(usize, u32)> {
        let at = self.pos;
        let c = self.chars[self.pos];
        self.pos += 1;
        let var = match c {
            'x' if self.dim == 2 => 0,
            'y' if self.dim == 2 => 1,
            'z' => {
                let n = self.integer()?;
                let idx = usize::try_from(&n).unwrap_or(0);
                if idx == 0 || idx > self.dim {
                    return Err(Error::Parse { position: at, message: format!("variable z{n} out of range 1..{}", self.dim) });
                }
                idx - 1
            }
            _ => return Err(Error::Parse { position: at, message: format!("unknown variable '{c}'") }),
        };
        let e = if self.eat('^') {
            let at = self.pos;
            let n = self.integer()?;
            n.try_into().map_err(|_| Error::Parse { position: at, message: "exponent too large".into() })?
        } else {
            1
        };
        Ok((var, e))
    }
}

/// Canonical text, terms from greatest to least under `ord`.
pub fn format_polynomial(p: &Polynomial, ord: &WeightedOrder) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.sorted_terms(ord).into_iter().enumerate() {
        let t = format_term(c, m);
        if i > 0 && !t.starts_with('-') {
            out.push('+');
        }
        out.push_str(&t);
    }
    out
}

fn format_term(c: &GaussianRational, m: &Monomial) -> String {
    if m.is_one() {
        return c.to_string();
    }
    if c.is_one() {
        return m.to_string();
    }
    if c.is_real() && (-c).is_one() {
        return format!("-{m}");
    }
    format!("{c}*{m}")
}
