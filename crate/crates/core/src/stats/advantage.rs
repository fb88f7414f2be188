//! Monte Carlo advantage with Hoeffding confidence intervals.

use rand::Rng;

use super::distinguisher::Distinguisher;
use crate::error::{Error, Result};
use crate::lwe::SampleBatch;

pub const DEFAULT_CONFIDENCE: f64 = 0.99;

/// `|Pr[A(P0) = 1] - Pr[A(P1) = 1]|` estimated from `trials` draws of each.
#[derive(Clone, Debug, PartialEq)]
pub struct AdvantageEstimate {
    /// Signed difference `p0 - p1`.
    pub signed: f64,
    pub advantage: f64,
    pub ci_halfwidth: f64,
    pub trials: usize,
    pub p0: f64,
    pub p1: f64,
}

impl AdvantageEstimate {
    pub fn lower(&self) -> f64 {
        (self.advantage - self.ci_halfwidth).max(0.0)
    }

    pub fn upper(&self) -> f64 {
        (self.advantage + self.ci_halfwidth).min(1.0)
    }
}

/// Half-width that covers one Bernoulli mean from `trials` draws with
/// probability `1 - fail`: `sqrt(ln(2 / fail) / (2 trials))`.
pub fn hoeffding_halfwidth(trials: usize, fail: f64) -> f64 {
    ((2.0 / fail).ln() / (2.0 * trials as f64)).sqrt()
}

/// Runs the distinguisher on `trials` batches from each generator. A
/// generator may return `None` (an aborted reduction), which counts as
/// output 0. The interval holds at `confidence` for the difference,
/// splitting the failure probability between the two means.
pub fn advantage_estimate<D, G0, G1, R>(
    d: &D,
    mut gen0: G0,
    mut gen1: G1,
    trials: usize,
    confidence: f64,
    rng: &mut R,
) -> Result<AdvantageEstimate>
where
    D: Distinguisher + ?Sized,
    G0: FnMut(&mut R) -> Result<Option<SampleBatch>>,
    G1: FnMut(&mut R) -> Result<Option<SampleBatch>>,
    R: Rng + ?Sized,
{
    if trials < 100 {
        return Err(Error::param("trials", format!("need at least 100, got {trials}")));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::param("confidence", "must lie in (0, 1)"));
    }
    let (mut h0, mut h1) = (0usize, 0usize);
    for _ in 0..trials {
        if gen0(rng)?.is_some_and(|b| d.decide(&b)) {
            h0 += 1;
        }
        if gen1(rng)?.is_some_and(|b| d.decide(&b)) {
            h1 += 1;
        }
    }
    Ok(from_counts(h0, h1, trials, confidence))
}

/// Estimate from hit counts.
pub fn from_counts(h0: usize, h1: usize, trials: usize, confidence: f64) -> AdvantageEstimate {
    let p0 = h0 as f64 / trials as f64;
    let p1 = h1 as f64 / trials as f64;
    let half = hoeffding_halfwidth(trials, (1.0 - confidence) / 2.0);
    AdvantageEstimate {
        signed: p0 - p1,
        advantage: (p0 - p1).abs(),
        ci_halfwidth: 2.0 * half,
        trials,
        p0,
        p1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lwe::{gen_uniform_batch, LweParams, NoiseSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn params() -> LweParams {
        LweParams::new(1, 1, 8u32, NoiseSpec::Gaussian(0.1)).unwrap()
    }

    #[test]
    fn equal_generators() {
        let p = params();
        let d = |b: &SampleBatch| b.samples[0].b.to_f64() < 0.5;
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let est = advantage_estimate(
            &d,
            |r: &mut ChaCha20Rng| gen_uniform_batch(&p, r).map(Some),
            |r: &mut ChaCha20Rng| gen_uniform_batch(&p, r).map(Some),
            1000,
            DEFAULT_CONFIDENCE,
            &mut rng,
        )
        .unwrap();
        assert!(est.advantage <= est.ci_halfwidth);
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let again = advantage_estimate(
            &d,
            |r: &mut ChaCha20Rng| gen_uniform_batch(&p, r).map(Some),
            |r: &mut ChaCha20Rng| gen_uniform_batch(&p, r).map(Some),
            1000,
            DEFAULT_CONFIDENCE,
            &mut rng,
        )
        .unwrap();
        assert_eq!(est, again);
    }

    #[test]
    fn disjoint_supports() {
        let p = params();
        let d = |b: &SampleBatch| b.samples[0].b.to_f64() < 0.5;
        let half = |lo: bool| {
            let p = p.clone();
            move |r: &mut ChaCha20Rng| {
                let mut b = gen_uniform_batch(&p, r)?;
                let x = b.samples[0].b.to_f64() / 2.0 + if lo { 0.0 } else { 0.5 };
                b.samples[0].b = crate::arith::TorusElem::from_f64(x, p.bits);
                Ok(Some(b))
            }
        };
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let est = advantage_estimate(&d, half(true), half(false), 200, DEFAULT_CONFIDENCE, &mut rng).unwrap();
        assert_eq!(est.advantage, 1.0);
    }

    #[test]
    fn hoeffding_coverage() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let (p0, p1, trials) = (0.6, 0.35, 200);
        let covered = (0..1000)
            .filter(|_| {
                let h0 = (0..trials).filter(|_| rng.random::<f64>() < p0).count();
                let h1 = (0..trials).filter(|_| rng.random::<f64>() < p1).count();
                let est = from_counts(h0, h1, trials, DEFAULT_CONFIDENCE);
                (est.advantage - (p0 - p1)).abs() <= est.ci_halfwidth
            })
            .count();
        assert!(covered >= 990, "{covered}");
    }
}
