//! Exact arithmetic in `F_p` and `F_{p^m}` together with the dense linear
//! algebra the rest of the crate is built on.

mod field;
mod matrix;
mod span;
mod unipoly;

pub use field::{is_prime, Field, FieldRef, Scalar};
pub use matrix::{char_poly, solve_linear, LinearSolution, Matrix};
pub use span::{Insert, Span};
pub use unipoly::UniPoly;
