//! Generators for secrets and LWE batches.

use num_bigint::{BigInt, BigUint};
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::batch::{LweSample, SampleBatch, Transparent};
use super::params::{LweParams, NoiseSpec, Secret, SecretSpec};
use crate::arith::{reduce, uniform_below, TorusElem};
use crate::error::{Error, Result};
use crate::gaussian::DGauss1d;

/// Draws a secret of dimension `n` from `spec`.
pub fn gen_secret<R: Rng + ?Sized>(spec: SecretSpec, n: usize, q: &BigUint, rng: &mut R) -> Result<Secret> {
    let s = match spec {
        SecretSpec::UniformModQ => (0..n).map(|_| BigInt::from(uniform_below(rng, q))).collect(),
        SecretSpec::Binary => (0..n).map(|_| BigInt::from(rng.random::<bool>() as u8)).collect(),
        SecretSpec::DiscreteGaussian(r) => {
            let d = DGauss1d::new(0.0, r)?;
            (0..n)
                .map(|_| d.sample(rng).map(|x| BigInt::from(x.offset)))
                .collect::<Result<_>>()?
        }
    };
    Ok(Secret { s, spec })
}

/// `<a, s> mod q` for numerators `a`.
pub fn inner_mod_q(a: &[BigUint], s: &[BigInt], q: &BigUint) -> BigUint {
    let acc: BigInt = a.iter().zip(s).map(|(x, y)| BigInt::from(x.clone()) * y).sum();
    reduce(&acc, q)
}

/// One error term. `beta` overrides the width of unknown-bounded noise and
/// must not exceed its bound.
pub fn sample_noise<R: Rng + ?Sized>(noise: NoiseSpec, beta: Option<f64>, rng: &mut R) -> Result<f64> {
    let width = match (noise, beta) {
        (NoiseSpec::Zero, _) => return Ok(0.0),
        (NoiseSpec::Gaussian(a), None) => a,
        (NoiseSpec::Gaussian(_), Some(b)) => b,
        (NoiseSpec::UnknownBounded(a), Some(b)) if b <= a => b,
        (NoiseSpec::UnknownBounded(a), Some(b)) => {
            return Err(Error::param("beta", format!("{b} exceeds the noise bound {a}")))
        }
        (NoiseSpec::UnknownBounded(_), None) => {
            return Err(Error::param(
                "beta",
                "unknown-bounded noise needs an explicit width beta",
            ))
        }
    };
    if width == 0.0 {
        return Ok(0.0);
    }
    let d = Normal::new(0.0, width / (2.0 * std::f64::consts::PI).sqrt())
        .map_err(|e| Error::param("alpha", e.to_string()))?;
    Ok(d.sample(rng))
}

fn uniform_a<R: Rng + ?Sized>(n: usize, q: &BigUint, rng: &mut R) -> Vec<BigUint> {
    (0..n).map(|_| uniform_below(rng, q)).collect()
}

fn lwe_sample(a: Vec<BigUint>, s: &[BigInt], e: f64, p: &LweParams) -> LweSample {
    let dot = inner_mod_q(&a, s, &p.q);
    let (exact, _) = TorusElem::from_ratio(&dot, &p.q, p.bits);
    LweSample {
        a,
        b: exact + TorusElem::from_f64(e, p.bits),
    }
}

fn check_secret(params: &LweParams, s: &Secret) -> Result<()> {
    params.validate()?;
    if s.dim() != params.n {
        return Err(Error::Dimension {
            what: "secret",
            expected: params.n,
            found: s.dim(),
        });
    }
    Ok(())
}

fn lwe_batch<R: Rng + ?Sized>(
    params: &LweParams,
    s: &Secret,
    beta: Option<f64>,
    first_errorless: bool,
    rng: &mut R,
) -> Result<SampleBatch> {
    check_secret(params, s)?;
    let mut samples = Vec::with_capacity(params.m);
    let mut noise = Vec::with_capacity(params.m);
    for i in 0..params.m {
        let a = uniform_a(params.n, &params.q, rng);
        let e = if i == 0 && first_errorless {
            0.0
        } else {
            sample_noise(params.noise, beta, rng)?
        };
        samples.push(lwe_sample(a, &s.s, e, params));
        noise.push(e);
    }
    let name = if first_errorless { "first-errorless" } else { "lwe" };
    Ok(SampleBatch {
        params: params.clone(),
        samples,
        first_errorless,
        transparent: Some(Transparent {
            secret: s.s.clone(),
            noise,
        }),
        provenance: vec![name.to_string()],
    })
}

/// `m` samples from `A_{q,s,phi}`; the batch keeps the secret and noise.
pub fn gen_lwe_batch<R: Rng + ?Sized>(params: &LweParams, s: &Secret, rng: &mut R) -> Result<SampleBatch> {
    lwe_batch(params, s, None, false, rng)
}

/// As [`gen_lwe_batch`] with an explicit noise width `beta`.
pub fn gen_lwe_batch_beta<R: Rng + ?Sized>(
    params: &LweParams,
    s: &Secret,
    beta: f64,
    rng: &mut R,
) -> Result<SampleBatch> {
    lwe_batch(params, s, Some(beta), false, rng)
}

/// `m` uniform pairs over `T_q^n x T`.
pub fn gen_uniform_batch<R: Rng + ?Sized>(params: &LweParams, rng: &mut R) -> Result<SampleBatch> {
    params.validate()?;
    let samples = (0..params.m)
        .map(|_| LweSample {
            a: uniform_a(params.n, &params.q, rng),
            b: TorusElem::from_raw(rng.random::<u128>(), params.bits),
        })
        .collect();
    Ok(SampleBatch {
        params: params.clone(),
        samples,
        first_errorless: false,
        transparent: None,
        provenance: vec!["uniform".to_string()],
    })
}

/// LWE batch whose first sample carries no error.
pub fn gen_first_errorless_batch<R: Rng + ?Sized>(params: &LweParams, s: &Secret, rng: &mut R) -> Result<SampleBatch> {
    lwe_batch(params, s, None, true, rng)
}

/// Uniform counterpart: the first sample is uniform over `T_q^n x T_q`, the
/// rest over `T_q^n x T`.
pub fn gen_first_errorless_uniform<R: Rng + ?Sized>(params: &LweParams, rng: &mut R) -> Result<SampleBatch> {
    params.validate()?;
    let mut samples = Vec::with_capacity(params.m);
    let a = uniform_a(params.n, &params.q, rng);
    let k = uniform_below(rng, &params.q);
    samples.push(LweSample {
        a,
        b: TorusElem::from_ratio(&k, &params.q, params.bits).0,
    });
    for _ in 1..params.m {
        samples.push(LweSample {
            a: uniform_a(params.n, &params.q, rng),
            b: TorusElem::from_raw(rng.random::<u128>(), params.bits),
        });
    }
    Ok(SampleBatch {
        params: params.clone(),
        samples,
        first_errorless: true,
        transparent: None,
        provenance: vec!["first-errorless-uniform".to_string()],
    })
}
