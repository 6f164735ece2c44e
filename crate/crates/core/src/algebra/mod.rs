//! Exact arithmetic: rationals, cyclotomic fields, Laurent polynomials in
//! `t = L^{1/r}` and cyclotomic matrices.

pub mod cyclotomic;
pub mod laurent;
pub mod matrix;
pub mod rational;

pub use cyclotomic::Cyclotomic;
pub use laurent::{geom_sum, LaurentPoly};
pub use matrix::{eigen_exponents, kernel_basis, matrix_fixed_dim, rref, CycloMatrix};
pub use rational::{format_rational, parse_rational, Integer, Rational};
