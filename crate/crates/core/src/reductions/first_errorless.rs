//! From LWE in dimension `n - 1` to the variant of dimension `n` whose first
//! sample carries no error.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use super::{AdvantageMap, ReductionReport};
use crate::arith::{complete_with_reducer, inverse_mod, reduce, uniform_below, IntMatrix, TorusElem};
use crate::error::{Error, Result};
use crate::lwe::{LweParams, LweSample, SampleBatch, Transparent};
use crate::{abort, Outcome};

/// Output of [`first_errorless_reduce`].
#[derive(Clone, Debug)]
pub struct FirstErrorless {
    pub batch: SampleBatch,
    pub report: ReductionReport,
    /// `U`, invertible mod `q`, with first column `a'`.
    pub u: IntMatrix,
    /// `U^{-1} mod q`.
    pub u_inv: IntMatrix,
    pub s0: BigUint,
}

const TRIAL_LIMIT: u64 = 1 << 20;

/// `sum_{p | q} p^{-n}` over the prime factors of `q`.
///
/// Factors below 2^20 are found by trial division; a cofactor left over is
/// charged as if it had as many prime factors of size 2^20 as its bit length
/// allows, which keeps the value an upper bound.
pub fn prime_loss(n: usize, q: &BigUint) -> f64 {
    let mut rest = q.clone();
    let mut loss = 0.0;
    let mut p = 2u64;
    while p < TRIAL_LIMIT && rest > BigUint::one() {
        let bp = BigUint::from(p);
        if (&rest % &bp).is_zero() {
            loss += (p as f64).powi(-(n as i32));
            while (&rest % &bp).is_zero() {
                rest /= &bp;
            }
        }
        if BigUint::from(p) * BigUint::from(p) > rest {
            if rest > BigUint::one() {
                loss += rest.to_f64().unwrap_or(f64::INFINITY).powi(-(n as i32));
            }
            return loss;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > BigUint::one() {
        let count = (rest.bits() as f64 / 20.0).ceil();
        loss += count * (TRIAL_LIMIT as f64).powi(-(n as i32));
    }
    loss
}

/// Draws `a'` uniform in `{0..q-1}^n`, aborts unless its gcd is coprime to
/// `q`, completes it to `U` (invertible mod `q`, first column `a'`), draws
/// `s_0`, and emits `(a'/q, s_0/q)` followed by `(U (d|a), b + s_0 d)` for the
/// first `m_out - 1` input samples, each with fresh uniform `d` in `T_q`.
///
/// The secret of the output is `(U^{-1})^T (s_0 | s) mod q`.
pub fn first_errorless_reduce<R: Rng + ?Sized>(
    batch: &SampleBatch,
    m_out: Option<usize>,
    rng: &mut R,
) -> Result<Outcome<FirstErrorless>> {
    let p = &batch.params;
    let n = p.n + 1;
    let m_out = m_out.unwrap_or(batch.len());
    if m_out == 0 || m_out > batch.len() + 1 {
        return Err(Error::param(
            "m",
            format!("can emit between 1 and {} samples, asked for {m_out}", batch.len() + 1),
        ));
    }
    let q = &p.q;
    let a_first: Vec<BigInt> = (0..n).map(|_| BigInt::from(uniform_below(rng, q))).collect();
    let g = a_first.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let qi = BigInt::from(q.clone());
    if g.is_zero() || !g.gcd(&qi).is_one() {
        return Ok(abort(
            "first-errorless",
            format!("gcd {g} of a' is not coprime with {q}"),
        ));
    }
    let completion = complete_with_reducer(&a_first, q)?;
    let g_inv = inverse_mod(&completion.gcd, q).expect("gcd checked coprime");
    let mut u_inv = completion.reducer.clone();
    for j in 0..n {
        let v = u_inv.get(0, j) * BigInt::from(g_inv.clone());
        u_inv.set(0, j, v);
    }
    let u_inv = u_inv.mod_q(q);
    let u = completion.u;
    let s0 = uniform_below(rng, q);

    let mut samples = Vec::with_capacity(m_out);
    samples.push(LweSample {
        a: a_first.iter().map(|x| reduce(x, q)).collect(),
        b: TorusElem::from_ratio(&s0, q, p.bits).0,
    });
    for smp in &batch.samples[..m_out - 1] {
        let d = uniform_below(rng, q);
        let mut v = Vec::with_capacity(n);
        v.push(BigInt::from(d.clone()));
        v.extend(smp.a.iter().map(|x| BigInt::from(x.clone())));
        let a: Vec<BigUint> = u.mul_vec(&v)?.iter().map(|x| reduce(x, q)).collect();
        let shift = TorusElem::from_ratio(&((&s0 * &d) % q), q, p.bits).0;
        samples.push(LweSample { a, b: smp.b + shift });
    }

    let transparent = batch.transparent.as_ref().map(|tr| {
        let mut full = Vec::with_capacity(n);
        full.push(BigInt::from(s0.clone()));
        full.extend(tr.secret.iter().cloned());
        let secret = u_inv
            .transpose()
            .mul_vec(&full)
            .expect("dimensions agree")
            .iter()
            .map(|x| BigInt::from(reduce(x, q)))
            .collect();
        let mut noise = Vec::with_capacity(m_out);
        noise.push(0.0);
        noise.extend_from_slice(&tr.noise[..m_out - 1]);
        Transparent { secret, noise }
    });

    let params = LweParams {
        n,
        m: m_out,
        ..p.clone()
    };
    let mut provenance = batch.provenance.clone();
    provenance.push("first-errorless".to_string());
    let report = ReductionReport {
        stage: "first-errorless".to_string(),
        step: "first sample errorless",
        input: format!("n={} m={} q={} noise={}", p.n, p.m, q, p.noise),
        output: format!("n={n} m={m_out} q={q} noise={}", p.noise),
        noise: p.noise.alpha(),
        extra: vec![],
        eps: 0.0,
        advantage: AdvantageMap {
            scale: 1.0,
            loss: prime_loss(n, q),
        },
    };
    Ok(Outcome::Done(FirstErrorless {
        batch: SampleBatch {
            params,
            samples,
            first_errorless: true,
            transparent,
            provenance,
        },
        report,
        u,
        u_inv,
        s0,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lwe::{gen_lwe_batch, gen_secret, gen_uniform_batch, inner_mod_q, NoiseSpec, SecretSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn prime_loss_values() {
        assert_eq!(prime_loss(2, &BigUint::from(2u8)), 0.25);
        assert_eq!(prime_loss(3, &BigUint::from(32u8)), 0.125);
        let twelve = prime_loss(2, &BigUint::from(12u8));
        assert!((twelve - (0.25 + 1.0 / 9.0)).abs() < 1e-15);
        let p = BigUint::from(65_537u32);
        assert!((prime_loss(1, &p) - 1.0 / 65_537.0).abs() < 1e-18);
        let big = BigUint::from(1_000_003u64) * BigUint::from(1_000_033u64);
        assert!(prime_loss(1, &big) >= 1.0 / 1_000_003.0);
    }

    #[test]
    fn transparent_secret_is_exact() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let mut done = 0;
        for trial in 0..1000 {
            let n = 1 + trial % 3;
            let q = [5u32, 8, 12, 16][trial % 4];
            let p = LweParams::new(n, 6, q, NoiseSpec::Gaussian(0.01)).unwrap();
            let s = gen_secret(SecretSpec::UniformModQ, n, &p.q, &mut rng).unwrap();
            let b = gen_lwe_batch(&p, &s, &mut rng).unwrap();
            let Outcome::Done(out) = first_errorless_reduce(&b, None, &mut rng).unwrap() else {
                continue;
            };
            done += 1;
            let tr = out.batch.transparent.as_ref().unwrap();
            assert_eq!(out.batch.params.n, n + 1);
            let k = inner_mod_q(&out.batch.samples[0].a, &tr.secret, &p.q);
            assert_eq!(out.batch.samples[0].b, TorusElem::from_ratio(&k, &p.q, 64).0);
            let uu = out.u.mul(&out.u_inv).unwrap().mod_q(&p.q);
            assert_eq!(uu, IntMatrix::identity(n + 1));
            for (smp, e) in out.batch.samples.iter().zip(&tr.noise).skip(1) {
                let k = inner_mod_q(&smp.a, &tr.secret, &p.q);
                let resid = (smp.b - TorusElem::from_ratio(&k, &p.q, 64).0).centered();
                assert!((resid - e).abs() < 1e-12);
            }
        }
        assert!(done > 500);
    }

    #[test]
    fn uniform_input_first_b_on_grid() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let p = LweParams::new(2, 5, 7u32, NoiseSpec::Gaussian(0.1)).unwrap();
        let b = gen_uniform_batch(&p, &mut rng).unwrap();
        let out = loop {
            if let Outcome::Done(o) = first_errorless_reduce(&b, Some(6), &mut rng).unwrap() {
                break o;
            }
        };
        assert_eq!(out.batch.len(), 6);
        assert!(out.batch.first_errorless);
        let first = out.batch.samples[0].b;
        let k = first.nearest_grid(&p.q);
        assert_eq!(TorusElem::from_ratio(&k, &p.q, 64).0, first);
        assert!(first_errorless_reduce(&b, Some(7), &mut rng).is_err());
    }

    #[test]
    fn abort_rate_q2() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let p = LweParams::new(1, 3, 2u32, NoiseSpec::Gaussian(0.1)).unwrap();
        let b = gen_uniform_batch(&p, &mut rng).unwrap();
        let trials = 20_000;
        let aborts = (0..trials)
            .filter(|_| first_errorless_reduce(&b, None, &mut rng).unwrap().is_aborted())
            .count();
        let rate = aborts as f64 / trials as f64;
        let se = (0.25f64 * 0.75 / trials as f64).sqrt();
        assert!((rate - 0.25).abs() < 4.0 * se, "abort rate {rate}");
    }
}
