//! Monomials and sparse polynomials over the rationals.

mod monomial;
mod polynomial;

pub use monomial::Monomial;
pub use polynomial::{coeff, Coeff, Polynomial};
