//! Exact stable-division certification for polynomial ideals in the weighted
//! Hilbert function spaces `H_d^(t)` on the unit ball, together with
//! floating-point truncation experiments on the shift tuple.
//!
//! The exact layer ([`poly`], [`norms`], [`division`], [`groebner`],
//! [`stability`]) works over Gaussian rationals so that every algebraic
//! identity can be checked term by term. Floating point is confined to
//! [`operators`] and the row-operator gap in [`stability`] that builds on it.

pub mod division;
mod error;
pub mod gcd;
pub mod groebner;
pub mod linalg;
pub mod norms;
pub mod operators;
pub mod poly;
pub mod stability;

pub use error::{Error, Result};
pub use num_rational::BigRational as Rational;

pub use division::{divide, divide_vector, DivisionResult, Step, StepKind};
pub use gcd::ideal_gcd;
pub use groebner::{beurling_form, buchberger, is_member, BeurlingForm, Codimension, GroebnerBasis};
pub use norms::SpaceParams;
pub use stability::{certify, StabilityReport, Verdict};
pub use poly::{GaussianRational, Monomial, Polynomial, Term, VectorPolynomial, WeightedOrder};
