//! Normal form: turn samples with a uniform secret into samples whose secret
//! is distributed like the noise.

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rand::Rng;

use super::subsequence::{find_invertible_subsequence, subsequence_budget};
use super::{check_eps, round_to_coset, AdvantageMap, ReductionReport};
use crate::arith::{centered, reduce, TorusElem};
use crate::error::{Error, Result};
use crate::lwe::{LweParams, LweSample, SampleBatch, Transparent};
use crate::Outcome;

/// Smallest admissible smoothing width `sqrt(ln(2n(1+1/eps))/pi) / q`.
pub fn normal_form_min_s(n: usize, q: &BigUint, eps: f64) -> f64 {
    let qf = q.to_f64().unwrap_or(f64::INFINITY);
    ((2.0 * n as f64 * (1.0 + 1.0 / eps)).ln() / PI).sqrt() / qf
}

/// Number of samples spent on finding the invertible block.
pub fn normal_form_budget(n: usize, q: &BigUint) -> usize {
    subsequence_budget(n, q, 16.0, 4.0)
}

/// Output of [`normal_form_reduce`].
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub batch: SampleBatch,
    pub report: ReductionReport,
    /// Indices of the input samples that formed the invertible block.
    pub block: Vec<usize>,
}

/// Spends the first `16n + ceil(4 ln ln q)` samples on an invertible block
/// `A_0` with `b_0 = A_0^T s + e_0`, smooths `b_0` onto the `q`-grid by adding
/// `x` from `D_{q^{-1}Z^n - b_0, s}`, and maps every remaining `(a, b)` to
/// `(A_0^{-1} a, b - <A_0^{-1} q a, b_0 + x>)`. The new secret is
/// `-q (e_0 + x)`.
pub fn normal_form_reduce<R: Rng + ?Sized>(
    batch: &SampleBatch,
    s_param: f64,
    eps: f64,
    rng: &mut R,
) -> Result<Outcome<NormalForm>> {
    let p = &batch.params;
    check_eps(eps)?;
    if p.q < BigUint::from(25u8) {
        return Err(Error::param("q", format!("normal form needs q >= 25, got {}", p.q)));
    }
    let min_s = normal_form_min_s(p.n, &p.q, eps);
    if !(s_param >= min_s) {
        return Err(Error::param(
            "s",
            format!("smoothing width {s_param} is below sqrt(ln(2n(1+1/eps))/pi)/q = {min_s}"),
        ));
    }
    let budget = normal_form_budget(p.n, &p.q);
    if batch.len() <= budget {
        return Err(Error::param(
            "m",
            format!("need more than {budget} samples, got {}", batch.len()),
        ));
    }
    let (head, tail) = batch.samples.split_at(budget);
    let vectors: Vec<Vec<BigUint>> = head.iter().map(|s| s.a.clone()).collect();
    let block = match find_invertible_subsequence(&vectors, p.n, &p.q)? {
        Outcome::Done(b) => b,
        Outcome::Aborted(a) => return Ok(Outcome::Aborted(a)),
    };
    let qf = p.q.to_f64().unwrap_or(f64::INFINITY);
    let mut b0_num = Vec::with_capacity(p.n);
    for &i in &block.indices {
        let (num, _) = round_to_coset(&head[i].b, &p.q, qf * s_param, rng)?;
        b0_num.push(BigInt::from(num));
    }
    let mut samples = Vec::with_capacity(tail.len());
    for smp in tail {
        let a: Vec<BigInt> = smp.a.iter().map(|x| BigInt::from(x.clone())).collect();
        let a_new: Vec<BigUint> = block.inverse.mul_vec(&a)?.iter().map(|x| reduce(x, &p.q)).collect();
        let dot: BigInt = a_new
            .iter()
            .zip(&b0_num)
            .map(|(x, y)| BigInt::from(x.clone()) * y)
            .sum();
        let (shift, _) = TorusElem::from_ratio(&reduce(&dot, &p.q), &p.q, p.bits);
        samples.push(LweSample {
            a: a_new,
            b: smp.b - shift,
        });
    }
    let transparent = batch.transparent.as_ref().map(|tr| {
        // A_0^T s - b_0' = -q (e_0 + x) mod q, and it is small.
        let secret = (0..p.n)
            .map(|k| {
                let col = block.matrix.column(k);
                let dot: BigInt = col.iter().zip(&tr.secret).map(|(x, y)| x * y).sum();
                centered(&reduce(&(dot - &b0_num[k]), &p.q), &p.q)
            })
            .collect();
        Transparent {
            secret,
            noise: tr.noise[budget..].to_vec(),
        }
    });
    let params = LweParams {
        m: samples.len(),
        ..p.clone()
    };
    let mut provenance = batch.provenance.clone();
    provenance.push("normal-form".to_string());
    let alpha = p.noise.alpha();
    let report = ReductionReport {
        stage: "normal-form".to_string(),
        step: "normal form (secret drawn from the noise distribution)",
        input: format!("n={} m={} q={} noise={}", p.n, p.m, p.q, p.noise),
        output: format!("n={} m={} q={} noise={}", p.n, params.m, p.q, p.noise),
        noise: alpha,
        extra: vec![(
            "secret_width".to_string(),
            qf * (alpha * alpha + s_param * s_param).sqrt(),
        )],
        eps,
        advantage: AdvantageMap {
            scale: 0.25,
            loss: 2.0 * eps,
        },
    };
    Ok(Outcome::Done(NormalForm {
        batch: SampleBatch {
            params,
            samples,
            first_errorless: false,
            transparent,
            provenance,
        },
        report,
        block: block.indices,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lwe::{gen_lwe_batch, gen_secret, inner_mod_q, NoiseSpec, SecretSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn budget_and_min_width() {
        let q = BigUint::from(32u8);
        assert_eq!(normal_form_budget(2, &q), 32 + 5);
        let s = normal_form_min_s(2, &q, 2f64.powi(-20));
        let expect = ((4.0 * (1.0 + 2f64.powi(20))).ln() / PI).sqrt() / 32.0;
        assert!((s - expect).abs() < 1e-15);
    }

    #[test]
    fn rejects_small_q_and_width() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let p = LweParams::new(2, 80, 16u32, NoiseSpec::Gaussian(0.05)).unwrap();
        let s = gen_secret(SecretSpec::UniformModQ, 2, &p.q, &mut rng).unwrap();
        let b = gen_lwe_batch(&p, &s, &mut rng).unwrap();
        assert!(normal_form_reduce(&b, 1.0, 0.01, &mut rng).is_err());

        let p = LweParams::new(2, 80, 32u32, NoiseSpec::Gaussian(0.05)).unwrap();
        let b = gen_lwe_batch(&p, &s, &mut rng).unwrap();
        assert!(normal_form_reduce(&b, 1e-6, 0.01, &mut rng).is_err());
    }

    #[test]
    fn transparent_secret_reproduces_output() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let p = LweParams::new(3, 120, 64u32, NoiseSpec::Gaussian(0.02)).unwrap();
        let eps = 2f64.powi(-20);
        let sp = normal_form_min_s(3, &p.q, eps);
        for _ in 0..20 {
            let s = gen_secret(SecretSpec::UniformModQ, 3, &p.q, &mut rng).unwrap();
            let b = gen_lwe_batch(&p, &s, &mut rng).unwrap();
            let out = normal_form_reduce(&b, sp, eps, &mut rng).unwrap().done().unwrap();
            let tr = out.batch.transparent.as_ref().unwrap();
            assert_eq!(out.batch.len(), 120 - normal_form_budget(3, &p.q));
            for (smp, e) in out.batch.samples.iter().zip(&tr.noise) {
                let k = inner_mod_q(&smp.a, &tr.secret, &p.q);
                let clean = TorusElem::from_ratio(&k, &p.q, 64).0;
                // q is a power of two, so every step is exact.
                assert_eq!(smp.b - clean, TorusElem::from_f64(*e, 64));
            }
            // The new secret is small: |x| stays far below q/2.
            assert!(tr.secret.iter().all(|x| x.magnitude() < &BigUint::from(20u8)));
        }
    }
}
