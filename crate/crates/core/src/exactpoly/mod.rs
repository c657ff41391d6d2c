//! Exact rational arithmetic and sparse polynomials in `∂, λ_1, ..., λ_q`.

mod poly;
pub mod rational;

pub use poly::{total_weight_of_monomial, Monomial, MultiPoly, PolyError};
pub use rational::{int, parse_rational, rat, Rational};
