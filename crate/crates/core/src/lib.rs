//! Sample-transforming reductions between variants of learning with errors,
//! exact discrete Gaussian samplers, and the statistical checks that test them.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: residues, fixed-point torus points, integer matrices.
//! * [`gaussian`]: theta series, exact 1D and lattice discrete Gaussians,
//!   continuous Gaussians with arbitrary covariance.
//! * [`lwe`]: sample batches and their generators.
//! * [`reductions`]: each transformation as a map on batches, plus pipelines
//!   that compose them with their advantage-loss budgets.
//! * [`stats`]: brute-force pmfs, distance estimates, exhaustive distinguishers.

// Negated float comparisons below are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Matrix code indexes several arrays with one loop variable.
#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod error;
pub mod gaussian;
pub mod lwe;
pub mod reductions;
pub mod seed;
pub mod stats;

pub use error::{Error, Result};

/// Outcome of a procedure that may legitimately give up with some probability.
///
/// An abort is not a failure of the implementation: callers count aborts,
/// because the advantage accounting of a reduction includes them.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome<T> {
    Done(T),
    Aborted(Abort),
}

/// Why a probabilistic step gave up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abort {
    pub step: &'static str,
    pub reason: String,
}

impl<T> Outcome<T> {
    pub fn done(self) -> Option<T> {
        match self {
            Outcome::Done(t) => Some(t),
            Outcome::Aborted(_) => None,
        }
    }

    pub fn is_aborted(&self) -> bool {
        matches!(self, Outcome::Aborted(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Done(t) => Outcome::Done(f(t)),
            Outcome::Aborted(a) => Outcome::Aborted(a),
        }
    }
}

pub(crate) fn abort<T>(step: &'static str, reason: impl Into<String>) -> Outcome<T> {
    Outcome::Aborted(Abort {
        step,
        reason: reason.into(),
    })
}
