//! Exact arithmetic on residues, torus points and integer matrices.

mod gcd;
mod hnf;
mod matrix;
mod modinv;
mod torus;
mod zq;

pub use gcd::{complete_with_reducer, extended_gcd, unimodular_completion, Completion};
pub use hnf::{hermite_normal_form, rank_of_echelon};
pub use matrix::IntMatrix;
pub use modinv::invert_mod_q;
pub use torus::{TorusElem, DEFAULT_PRECISION, MAX_PRECISION};
pub use zq::{centered, inverse_mod, reduce, uniform_below, TorusQElem, ZqElem};

pub(crate) use torus::check_precision;
pub(crate) use zq::check_modulus;
