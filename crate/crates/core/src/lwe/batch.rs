//! Batches of LWE samples.

use num_bigint::{BigInt, BigUint};

use super::params::LweParams;
use crate::arith::TorusElem;

/// One pair `(a, b)`: `a` in `T_q^n` stored as numerators over `q`, `b` in `T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LweSample {
    pub a: Vec<BigUint>,
    pub b: TorusElem,
}

/// Generating data kept alongside a batch so that tests can check identities
/// exactly. Reductions never read it; they only update it.
#[derive(Clone, Debug, PartialEq)]
pub struct Transparent {
    /// Secret modulo `q` (as integers; may be unreduced).
    pub secret: Vec<BigInt>,
    /// Per-sample error `e` before reduction mod 1.
    pub noise: Vec<f64>,
}

/// `m` samples plus parameters and bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleBatch {
    pub params: LweParams,
    pub samples: Vec<LweSample>,
    /// Set when the first sample is errorless (its `b` lies on the `T_q` grid).
    pub first_errorless: bool,
    pub transparent: Option<Transparent>,
    /// Names of the generator and of every stage applied so far.
    pub provenance: Vec<String>,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Drops the transparent data, as when a batch crosses a trust boundary.
    pub fn opaque(mut self) -> Self {
        self.transparent = None;
        self
    }
}
