//! Exact arithmetic for Hamiltonian Lie algebras `H_n` over finite fields.

pub mod aut;
pub mod bn;
pub mod error;
pub mod gf;
pub mod ham;
pub mod lab;
pub mod pinv;
pub mod wn;

pub use error::{Error, Result};
