//! The truncated polynomial ring `B_n`, substitution, and 2-forms.

mod form;
mod parse;
mod ring;

pub use form::{form_apply_algmap, form_apply_derivation, TwoForm};
pub use parse::{parse_poly, Parsed, GRAMMAR};
pub(crate) use ring::mul_into;
pub use ring::{Ring, RingRef, TruncPoly};
