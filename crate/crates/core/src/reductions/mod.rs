//! Transformation reductions between variants of LWE, each as a map on
//! batches, with the advantage-loss budget it is proven to satisfy.
//!
//! A reduction from problem `P` to problem `P'` turns a distinguisher for
//! `P'` with advantage `zeta` into one for `P` with advantage at least
//! `scale * zeta - loss`; [`AdvantageMap`] records that pair for each step
//! and composes them along a pipeline.

mod binary;
mod extlwe;
mod first_errorless;
mod gadget;
mod multi_secret;
mod normal_form;
mod pipeline;
mod quality;
mod subsequence;
mod switch;

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;

pub use binary::{
    binary_hybrids, binary_min_beta, binlwe_from_extlwe, binlwe_from_lwe, binlwe_zero_hint, lhl_delta, pad_dimension,
    BinaryHybridParams, Hybrid, HybridSet,
};
pub use extlwe::{extlwe_min_width, extlwe_reduce, ExtLweOutput};
pub use first_errorless::{first_errorless_reduce, prime_loss, FirstErrorless};
pub use gadget::{gadget_basis, modulus_reduction_pair, uniform_preimage, GadgetPair};
pub use multi_secret::multi_secret_reduce;
pub use normal_form::{normal_form_budget, normal_form_min_s, normal_form_reduce, NormalForm};
pub use pipeline::{compose_pipeline, theorem_budget, HintSource, Instance, Kind, Pipeline, PipelineRun, Shape, Stage};
pub use quality::{build_quality_u, spectral_norm, QualityCert};
pub use subsequence::{find_invertible_subsequence, subsequence_abort_bound, subsequence_budget, InvertibleSubset};
pub use switch::{mod_dim_switch, switch_min_r, Switched};

use crate::arith::TorusElem;
use crate::error::{Error, Result};
use crate::gaussian::DGauss1d;

/// `zeta -> scale * zeta - loss`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdvantageMap {
    pub scale: f64,
    pub loss: f64,
}

impl AdvantageMap {
    pub const IDENTITY: AdvantageMap = AdvantageMap { scale: 1.0, loss: 0.0 };

    pub fn apply(&self, zeta: f64) -> f64 {
        self.scale * zeta - self.loss
    }

    /// The map of running `self` on the output of `next`: a distinguisher for
    /// the final problem is first pulled back through `next`, then `self`.
    pub fn then(&self, next: &AdvantageMap) -> AdvantageMap {
        AdvantageMap {
            scale: self.scale * next.scale,
            loss: self.loss + self.scale * next.loss,
        }
    }
}

impl fmt::Display for AdvantageMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * zeta - {:e}", self.scale, self.loss)
    }
}

/// What one reduction step did and what it guarantees.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionReport {
    pub stage: String,
    /// Descriptive name of the guarantee being applied.
    pub step: &'static str,
    pub input: String,
    pub output: String,
    /// Noise width claimed for the output.
    pub noise: f64,
    /// Further named quantities (secret widths, sample counts, ...).
    pub extra: Vec<(String, f64)>,
    pub eps: f64,
    pub advantage: AdvantageMap,
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 0.5 {
        Ok(())
    } else {
        Err(Error::param("eps", format!("must lie in (0, 1/2), got {eps}")))
    }
}

pub(crate) fn q_f64(q: &BigUint) -> f64 {
    q.to_f64().unwrap_or(f64::INFINITY)
}

/// Moves `b` onto the order-`q` grid by adding `x` from `D_{q^{-1}Z - b, w/q}`.
///
/// Returns the numerator of `b + x` and `q x`.
pub(crate) fn round_to_coset<R: Rng + ?Sized>(
    b: &TorusElem,
    q: &BigUint,
    w: f64,
    rng: &mut R,
) -> Result<(BigUint, f64)> {
    let (up, gap) = b.ceil_scaled(q);
    let k = DGauss1d::new(gap, w)?.sample(rng)?;
    let num = crate::arith::reduce(&(num_bigint::BigInt::from(up) + k.offset), q);
    Ok((num, k.value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn advantage_composition() {
        let a = AdvantageMap { scale: 0.5, loss: 0.1 };
        let b = AdvantageMap { scale: 0.25, loss: 0.2 };
        let ab = a.then(&b);
        for zeta in [0.0, 0.3, 1.0] {
            assert!((ab.apply(zeta) - a.apply(b.apply(zeta))).abs() < 1e-15);
        }
        assert_eq!(AdvantageMap::IDENTITY.then(&a), a);
    }

    #[test]
    fn coset_rounding_lands_on_grid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(3);
        let q = BigUint::from(12u8);
        for i in 0..200u32 {
            let b = TorusElem::from_f64(i as f64 / 200.0 + 0.0013, 64);
            let (num, x) = round_to_coset(&b, &q, 2.0, &mut rng).unwrap();
            let back = (b.to_f64() + x / 12.0) * 12.0;
            let back = back.rem_euclid(12.0);
            let diff = (back - num.to_f64().unwrap()).abs();
            assert!(diff < 1e-9 || (12.0 - diff) < 1e-9);
        }
    }
}
