//! Likelihood-ratio distinguishers over all secrets of a tiny instance.

use num_traits::ToPrimitive;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::lwe::SampleBatch;

/// Largest secret space the exhaustive test enumerates.
pub const MAX_SECRETS: usize = 64;
pub const MAX_Q: u64 = 8;
pub const MAX_SAMPLES: usize = 4;
/// Target number of torus bins; rounded up to a multiple of `q`.
pub const TORUS_BINS: usize = 64;

/// Anything that maps a batch to a yes/no answer ("this is LWE").
pub trait Distinguisher {
    fn decide(&self, batch: &SampleBatch) -> bool;
}

impl<F: Fn(&SampleBatch) -> bool> Distinguisher for F {
    fn decide(&self, batch: &SampleBatch) -> bool {
        self(batch)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SecretSpace {
    /// All of `Z_q^n`.
    ModQ,
    /// `{0,1}^n`.
    Binary,
}

/// Bayes test between "LWE with a uniform secret from the given space and
/// noise width `alpha`" and "uniform", applied to the binned batch.
///
/// Each `b` is cut into `B` equal bins, `B` the least multiple of `q` that
/// is at least [`TORUS_BINS`], so that every shift `<a, s>/q` moves the noise
/// law by a whole number of bins. Under the LWE model the bin of `b` given
/// `a, s` has the mass of the wrapped Gaussian on the shifted bin; under the
/// uniform model every bin has mass `1/B`. The test answers yes iff the
/// average likelihood over all secrets exceeds `B^{-m}`.
#[derive(Clone, Debug)]
pub struct ExhaustiveDistinguisher {
    n: usize,
    q: u64,
    bins: usize,
    secrets: Vec<Vec<u64>>,
    /// `weights[d]`: mass of the wrapped noise on `[d/B, (d+1)/B)`.
    weights: Vec<f64>,
}

fn wrapped_bin_masses(alpha: f64, bins: usize) -> Result<Vec<f64>> {
    if alpha == 0.0 {
        let mut w = vec![0.0; bins];
        w[0] = 1.0;
        return Ok(w);
    }
    let sd = alpha / (2.0 * std::f64::consts::PI).sqrt();
    let d = Normal::new(0.0, sd).map_err(|e| Error::param("alpha", e.to_string()))?;
    let wraps = (12.0 * sd).ceil() as i64 + 1;
    Ok((0..bins)
        .map(|k| {
            let (lo, hi) = (k as f64 / bins as f64, (k + 1) as f64 / bins as f64);
            (-wraps..=wraps)
                .map(|t| d.cdf(hi + t as f64) - d.cdf(lo + t as f64))
                .sum()
        })
        .collect())
}

impl ExhaustiveDistinguisher {
    pub fn new(n: usize, q: u64, alpha: f64, space: SecretSpace) -> Result<Self> {
        if !(2..=MAX_Q).contains(&q) {
            return Err(Error::TooLarge(format!(
                "exhaustive distinguisher needs 2 <= q <= {MAX_Q}, got {q}"
            )));
        }
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::param(
                "alpha",
                format!("must be finite and nonnegative, got {alpha}"),
            ));
        }
        let base = match space {
            SecretSpace::ModQ => q,
            SecretSpace::Binary => 2,
        };
        let count = (base as u128)
            .checked_pow(n as u32)
            .filter(|&c| c <= MAX_SECRETS as u128);
        let Some(count) = count else {
            return Err(Error::TooLarge(format!(
                "secret space {base}^{n} exceeds {MAX_SECRETS} secrets"
            )));
        };
        let secrets = (0..count as u64)
            .map(|mut idx| {
                (0..n)
                    .map(|_| {
                        let d = idx % base;
                        idx /= base;
                        d
                    })
                    .collect()
            })
            .collect();
        let bins = TORUS_BINS.div_ceil(q as usize) * q as usize;
        Ok(ExhaustiveDistinguisher {
            n,
            q,
            bins,
            secrets,
            weights: wrapped_bin_masses(alpha, bins)?,
        })
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    /// `(average likelihood under LWE, likelihood under uniform)`.
    pub fn likelihoods(&self, batch: &SampleBatch) -> Result<(f64, f64)> {
        let p = &batch.params;
        if p.n != self.n || p.q.to_u64() != Some(self.q) {
            return Err(Error::param(
                "batch",
                format!(
                    "distinguisher is for n={} q={}, batch has n={} q={}",
                    self.n, self.q, p.n, p.q
                ),
            ));
        }
        if batch.len() > MAX_SAMPLES {
            return Err(Error::TooLarge(format!(
                "exhaustive distinguisher takes at most {MAX_SAMPLES} samples, got {}",
                batch.len()
            )));
        }
        let per_step = (self.bins as u64 / self.q) as usize;
        let rows: Vec<(Vec<u64>, usize)> = batch
            .samples
            .iter()
            .map(|s| {
                let a = s.a.iter().map(|x| x.to_u64().expect("q <= 8")).collect();
                let bin = ((s.b.to_f64() * self.bins as f64).floor() as usize).min(self.bins - 1);
                (a, bin)
            })
            .collect();
        let total: f64 = self
            .secrets
            .iter()
            .map(|s| {
                rows.iter()
                    .map(|(a, bin)| {
                        let shift = a.iter().zip(s).map(|(x, y)| x * y).sum::<u64>() % self.q;
                        let d = (bin + self.bins - shift as usize * per_step) % self.bins;
                        self.weights[d]
                    })
                    .product::<f64>()
            })
            .sum();
        let lwe = total / self.secrets.len() as f64;
        let uniform = (self.bins as f64).powi(-(batch.len() as i32));
        Ok((lwe, uniform))
    }
}

impl Distinguisher for ExhaustiveDistinguisher {
    fn decide(&self, batch: &SampleBatch) -> bool {
        match self.likelihoods(batch) {
            Ok((lwe, uniform)) => lwe > uniform,
            Err(_) => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lwe::{gen_lwe_batch, gen_secret, gen_uniform_batch, LweParams, NoiseSpec, SecretSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn rate(d: &ExhaustiveDistinguisher, params: &LweParams, lwe: bool, seed: u64) -> f64 {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let hits = (0..2000)
            .filter(|_| {
                let b = if lwe {
                    let s = gen_secret(SecretSpec::UniformModQ, params.n, &params.q, &mut rng).unwrap();
                    gen_lwe_batch(params, &s, &mut rng).unwrap()
                } else {
                    gen_uniform_batch(params, &mut rng).unwrap()
                };
                d.decide(&b)
            })
            .count();
        hits as f64 / 2000.0
    }

    #[test]
    fn masses_sum_to_one() {
        for alpha in [0.0, 0.01, 0.1, 1.0, 10.0] {
            let w = wrapped_bin_masses(alpha, 64).unwrap();
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_noise_is_found() {
        let params = LweParams::new(1, 4, 8u32, NoiseSpec::Zero).unwrap();
        let d = ExhaustiveDistinguisher::new(1, 8, 0.0, SecretSpace::ModQ).unwrap();
        let adv = rate(&d, &params, true, 1) - rate(&d, &params, false, 2);
        assert!(adv >= 0.9, "{adv}");
    }

    #[test]
    fn huge_noise_hides_everything() {
        let params = LweParams::new(1, 4, 8u32, NoiseSpec::Gaussian(10.0)).unwrap();
        let d = ExhaustiveDistinguisher::new(1, 8, 10.0, SecretSpace::ModQ).unwrap();
        let adv = rate(&d, &params, true, 3) - rate(&d, &params, false, 4);
        assert!(adv.abs() < 0.05, "{adv}");
    }

    #[test]
    fn refuses_large_spaces() {
        assert!(ExhaustiveDistinguisher::new(3, 8, 0.1, SecretSpace::ModQ).is_err());
        assert!(ExhaustiveDistinguisher::new(1, 16, 0.1, SecretSpace::ModQ).is_err());
        assert!(ExhaustiveDistinguisher::new(6, 8, 0.1, SecretSpace::Binary).is_ok());
        assert!(ExhaustiveDistinguisher::new(7, 8, 0.1, SecretSpace::Binary).is_err());
    }
}
