//! Turning a distinguisher for one noise width into one for any width below it.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::advantage::hoeffding_halfwidth;
use super::distinguisher::Distinguisher;
use crate::arith::TorusElem;
use crate::error::{Error, Result};
use crate::lwe::{gen_uniform_batch, LweParams, SampleBatch};

/// Default probability that the wrapper's estimates are off.
pub const DEFAULT_FAILURE: f64 = 1.0 / 6.0;

/// Wraps a distinguisher `inner` for width exactly `alpha`.
///
/// The wrapper draws uniform batches to learn the inner acceptance rate on
/// uniform input, then for each added width `beta'` on a geometric grid
/// (plus `beta' = 0`) adds fresh noise of width `beta'` to every sample it
/// is given and measures the acceptance rate. If the input has noise width
/// `beta <= alpha`, the level with `beta^2 + beta'^2` closest to `alpha^2`
/// looks like width-`alpha` LWE to the inner algorithm; on uniform input
/// every level stays uniform. It answers "not uniform" when some level's
/// rate differs from the baseline by more than `tau = eps / 3`.
///
/// The grid ratio `rho` is the largest step for which batches at variance
/// ratio `rho^2` are within statistical distance `eps / 4` (by Pinsker's
/// inequality on the Gaussian KL divergence). Each rate uses enough trials
/// that all of them are within `tau / 2` except with probability `failure`.
#[derive(Clone, Debug)]
pub struct UnknownNoiseWrapper<'a, D: ?Sized> {
    inner: &'a D,
    params: LweParams,
    pub levels: Vec<f64>,
    pub trials_per_level: usize,
    pub tau: f64,
}

/// What one run of the wrapper saw.
#[derive(Clone, Debug, PartialEq)]
pub struct UnknownNoiseDecision {
    pub non_uniform: bool,
    /// First level whose rate left the band.
    pub level: Option<usize>,
    pub baseline: f64,
    pub rates: Vec<f64>,
    /// Samples drawn from the input distribution.
    pub samples_used: usize,
}

fn kl_batch(ratio: f64, m: usize) -> f64 {
    // Both directions of KL(N(0, 1) || N(0, ratio)); the larger one.
    let a = 0.5 * (1.0 / ratio - 1.0 + ratio.ln());
    let b = 0.5 * (ratio - 1.0 - ratio.ln());
    m as f64 * a.max(b)
}

/// Largest variance gap `eta` with `sqrt(KL / 2) <= eps / 4` for `m` samples.
pub fn variance_step(eps: f64, m: usize) -> f64 {
    let mut eta: f64 = 0.5;
    while (kl_batch(1.0 - eta, m) / 2.0).sqrt() > eps / 4.0 {
        eta *= 0.95;
    }
    eta
}

impl<'a, D: Distinguisher + ?Sized> UnknownNoiseWrapper<'a, D> {
    /// `params` describes the inner distinguisher's input: `n`, batch size
    /// `m`, `q` and the width `alpha` it was built for; `eps` is its advantage.
    pub fn new(inner: &'a D, params: LweParams, eps: f64, failure: f64) -> Result<Self> {
        params.validate()?;
        let alpha = params.noise.alpha();
        if !(alpha > 0.0) {
            return Err(Error::param("alpha", "needs a positive noise width"));
        }
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::param(
                "eps",
                format!("target advantage must lie in (0, 1], got {eps}"),
            ));
        }
        if !(failure > 0.0 && failure < 1.0) {
            return Err(Error::param("failure", "must lie in (0, 1)"));
        }
        let eta = variance_step(eps, params.m);
        let rho = (1.0 - eta).sqrt();
        let mut levels = vec![];
        let mut b = alpha;
        while b * b >= eta * alpha * alpha {
            levels.push(b);
            b *= rho;
        }
        levels.push(0.0);
        let tau = eps / 3.0;
        let fail_each = failure / (levels.len() + 1) as f64;
        let mut trials = 1;
        while hoeffding_halfwidth(trials, fail_each) > tau / 2.0 {
            trials += 1;
        }
        Ok(UnknownNoiseWrapper {
            inner,
            params,
            levels,
            trials_per_level: trials,
            tau,
        })
    }

    /// Total input samples consumed by one run.
    pub fn samples_needed(&self) -> usize {
        self.levels.len() * self.trials_per_level * self.params.m
    }

    /// Runs the wrapper. `oracle` returns `m` fresh samples of the unknown
    /// distribution per call.
    pub fn run<O, R>(&self, mut oracle: O, rng: &mut R) -> Result<UnknownNoiseDecision>
    where
        O: FnMut(&mut R) -> Result<SampleBatch>,
        R: Rng + ?Sized,
    {
        let t = self.trials_per_level;
        let mut base = 0;
        for _ in 0..t {
            if self.inner.decide(&gen_uniform_batch(&self.params, rng)?) {
                base += 1;
            }
        }
        let baseline = base as f64 / t as f64;
        let mut rates = Vec::with_capacity(self.levels.len());
        let mut used = 0;
        for (li, &extra) in self.levels.iter().enumerate() {
            let noise = if extra > 0.0 {
                Some(
                    Normal::new(0.0, extra / (2.0 * std::f64::consts::PI).sqrt())
                        .map_err(|e| Error::param("beta", e.to_string()))?,
                )
            } else {
                None
            };
            let mut hits = 0;
            for _ in 0..t {
                let mut batch = oracle(rng)?;
                if batch.len() != self.params.m {
                    return Err(Error::Dimension {
                        what: "oracle batch",
                        expected: self.params.m,
                        found: batch.len(),
                    });
                }
                used += batch.len();
                if let Some(d) = &noise {
                    for s in &mut batch.samples {
                        s.b = s.b + TorusElem::from_f64(d.sample(rng), s.b.bits());
                    }
                }
                batch.params.noise = self.params.noise;
                if self.inner.decide(&batch) {
                    hits += 1;
                }
            }
            let rate = hits as f64 / t as f64;
            rates.push(rate);
            if (rate - baseline).abs() > self.tau {
                return Ok(UnknownNoiseDecision {
                    non_uniform: true,
                    level: Some(li),
                    baseline,
                    rates,
                    samples_used: used,
                });
            }
        }
        Ok(UnknownNoiseDecision {
            non_uniform: false,
            level: None,
            baseline,
            rates,
            samples_used: used,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lwe::NoiseSpec;

    #[test]
    fn grid_covers_down_to_zero() {
        let p = LweParams::new(1, 4, 8u32, NoiseSpec::Gaussian(0.1)).unwrap();
        let d = |_: &SampleBatch| true;
        let w = UnknownNoiseWrapper::new(&d, p, 0.5, DEFAULT_FAILURE).unwrap();
        assert_eq!(w.levels[0], 0.1);
        assert_eq!(*w.levels.last().unwrap(), 0.0);
        let eta = variance_step(0.5, 4);
        for pair in w.levels.windows(2) {
            if pair[1] > 0.0 {
                assert!((pair[1] * pair[1] / (pair[0] * pair[0]) - (1.0 - eta)).abs() < 1e-12);
            } else {
                assert!(pair[0] * pair[0] < eta * 0.01 / (1.0 - eta) + 1e-15);
            }
        }
        assert!(hoeffding_halfwidth(w.trials_per_level, DEFAULT_FAILURE / (w.levels.len() + 1) as f64) <= w.tau / 2.0);
    }

    #[test]
    fn step_meets_distance_target() {
        for (eps, m) in [(0.5, 4), (0.1, 16), (0.9, 1)] {
            let eta = variance_step(eps, m);
            assert!((kl_batch(1.0 - eta, m) / 2.0).sqrt() <= eps / 4.0);
        }
    }
}
