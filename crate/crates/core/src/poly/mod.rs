//! Exact sparse multivariate polynomials over `Q(i)` with weighted gradings.

mod monomial;
mod order;
pub mod parse;
mod polynomial;
mod scalar;
mod vector;

pub use monomial::Monomial;
pub(crate) use monomial::factorial;
pub use order::WeightedOrder;
pub use parse::{format_polynomial, parse, parse_polynomial, parse_vector, Parsed};
pub use polynomial::{Polynomial, Term};
pub use scalar::GaussianRational;
pub use vector::{PositionedTerm, VectorPolynomial};
