//! Prime fields, their extensions, polynomials and linear algebra.

pub mod field;
pub mod linalg;
pub mod poly;

pub use field::{binomial_mod, is_prime, make_field, Field, FieldDesc, FieldElem, MAX_FIELD_ORDER};
pub use linalg::Matrix;
pub use poly::{roots_in_field, roots_in_field_seeded, Poly, DEFAULT_SPLIT_SEED};
