//! From first-is-errorless LWE to extended LWE with a 0/1 hint vector.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_bigint::{BigInt, BigUint};
use rand::Rng;

use super::quality::build_quality_u;
use super::{check_eps, q_f64, round_to_coset, AdvantageMap, ReductionReport};
use crate::arith::{reduce, TorusElem};
use crate::error::{Error, Result};
use crate::gaussian::{psd_sqrt, sample_cont_gauss, CovarianceFactor};
use crate::lwe::{ExtLweChallenge, ExtLweTransparent, NoiseSpec, SampleBatch};

/// `sqrt(ln(2m(1+1/eps))/pi) / q`, the least admissible `alpha` and `r`.
pub fn extlwe_min_width(m: usize, q: &BigUint, eps: f64) -> f64 {
    ((2.0 * m as f64 * (1.0 + 1.0 / eps)).ln() / PI).sqrt() / q_f64(q)
}

/// Output of [`extlwe_reduce`].
#[derive(Clone, Debug)]
pub struct ExtLweOutput {
    pub challenge: ExtLweChallenge,
    /// Noise of the challenge, `D_{q^{-1} Z^m, sqrt(alpha^2 xi^2 + r^2)}`.
    pub chi: NoiseSpec,
    pub report: ReductionReport,
}

/// With `U` from the quality certificate of `z` and `A, b` the batch as an
/// `n x m` matrix and a vector, outputs
/// `(A U^T, U b + f + c, <z, f + c>)` where
/// `f` is drawn from `D_{alpha (xi^2 I - U' U'^T)^{1/2}}` and
/// `c` from `D_{q^{-1} Z^m - (U b + f), r}`.
pub fn extlwe_reduce<R: Rng + ?Sized>(
    batch: &SampleBatch,
    z: &[i64],
    r: f64,
    eps: f64,
    rng: &mut R,
) -> Result<ExtLweOutput> {
    let p = &batch.params;
    check_eps(eps)?;
    if !batch.first_errorless {
        return Err(Error::param("batch", "input must be first-is-errorless"));
    }
    let m = batch.len();
    if z.len() != m {
        return Err(Error::Dimension {
            what: "hint vector",
            expected: m,
            found: z.len(),
        });
    }
    let alpha = match p.noise {
        NoiseSpec::Gaussian(a) => a,
        other => return Err(Error::param("noise", format!("need Gaussian noise, got {other}"))),
    };
    let min = extlwe_min_width(m, &p.q, eps);
    if alpha < min || !(r >= min) {
        return Err(Error::param(
            "r",
            format!("alpha = {alpha} and r = {r} must both be at least {min}"),
        ));
    }
    let cert = build_quality_u(z)?;
    let (n, q) = (p.n, &p.q);
    let qf = q_f64(q);

    let up = DMatrix::from_row_slice(m, m - 1, &cert.u_prime.to_f64());
    let cov = DMatrix::identity(m, m) * (cert.xi * cert.xi) - &up * up.transpose();
    let f_factor = CovarianceFactor::new(psd_sqrt(&cov)?.matrix() * alpha);
    let f = sample_cont_gauss(&f_factor, rng);

    let a: Vec<Vec<BigUint>> = (0..n)
        .map(|k| {
            (0..m)
                .map(|j| {
                    let acc: BigInt = (0..m)
                        .map(|l| BigInt::from(batch.samples[l].a[k].clone()) * cert.u.get(j, l))
                        .sum();
                    reduce(&acc, q)
                })
                .collect()
        })
        .collect();

    let mut response = Vec::with_capacity(m);
    let mut qc = Vec::with_capacity(m);
    for j in 0..m {
        let mut bj = TorusElem::from_f64(f[j], p.bits);
        for l in 0..m {
            bj += batch.samples[l].b.mul_int(cert.u.get(j, l));
        }
        let (num, x) = round_to_coset(&bj, q, qf * r, rng)?;
        response.push(num);
        qc.push(x);
    }
    let hint_real: f64 = (0..m).filter(|&j| z[j] == 1).map(|j| qf * f[j] + qc[j]).sum();
    let hint = hint_real.round();
    if (hint_real - hint).abs() > 1e-6 {
        return Err(Error::param(
            "batch",
            format!("hint {hint_real} is not on q^-1 Z; the first sample is not errorless"),
        ));
    }
    let hint = BigInt::from(hint as i64);

    let transparent = batch.transparent.as_ref().map(|tr| {
        let noise = (0..m)
            .map(|j| {
                let ue: f64 = (0..m)
                    .map(|l| num_traits::ToPrimitive::to_f64(cert.u.get(j, l)).unwrap_or(0.0) * tr.noise[l])
                    .sum();
                BigInt::from((qf * (ue + f[j]) + qc[j]).round() as i64)
            })
            .collect();
        ExtLweTransparent {
            secrets: vec![tr.secret.clone()],
            noise: vec![noise],
        }
    });

    let out_alpha = (alpha * alpha * cert.xi * cert.xi + r * r).sqrt();
    let report = ReductionReport {
        stage: "extlwe".to_string(),
        step: "extended LWE with hints from a set of quality xi",
        input: format!("n={n} m={m} q={q} noise={}", p.noise),
        output: format!("n={n} m={m} q={q} t=1 chi=dgauss:{out_alpha}"),
        noise: out_alpha,
        extra: vec![("xi".to_string(), cert.xi)],
        eps,
        advantage: AdvantageMap {
            scale: 1.0,
            loss: 16.5 * eps,
        },
    };
    Ok(ExtLweOutput {
        challenge: ExtLweChallenge {
            n,
            m,
            q: q.clone(),
            a,
            responses: vec![response],
            hints: vec![hint],
            z: z.to_vec(),
            transparent,
        },
        chi: NoiseSpec::Gaussian(out_alpha),
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lwe::{gen_first_errorless_batch, gen_first_errorless_uniform, gen_secret, LweParams, SecretSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn fe_params(n: usize, m: usize, q: u32, alpha: f64) -> LweParams {
        LweParams::new(n, m, q, NoiseSpec::Gaussian(alpha)).unwrap()
    }

    #[test]
    fn zero_hint_is_zero() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let p = fe_params(2, 4, 16, 0.3);
        let s = gen_secret(SecretSpec::UniformModQ, 2, &p.q, &mut rng).unwrap();
        for _ in 0..50 {
            let b = gen_first_errorless_batch(&p, &s, &mut rng).unwrap();
            let out = extlwe_reduce(&b, &[0; 4], 0.3, 0.01, &mut rng).unwrap();
            assert_eq!(out.challenge.hints, vec![BigInt::from(0)]);
        }
    }

    #[test]
    fn hint_matches_noise_exactly() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let p = fe_params(3, 6, 64, 0.05);
        let eps = 2f64.powi(-20);
        let r = extlwe_min_width(6, &p.q, eps);
        for trial in 0..200 {
            let s = gen_secret(SecretSpec::UniformModQ, 3, &p.q, &mut rng).unwrap();
            let b = gen_first_errorless_batch(&p, &s, &mut rng).unwrap();
            let z: Vec<i64> = (0..6).map(|j| ((trial >> j) & 1) as i64).collect();
            let out = extlwe_reduce(&b, &z, r, eps, &mut rng).unwrap();
            let ch = &out.challenge;
            let tr = ch.transparent.as_ref().unwrap();
            let sum: BigInt = tr.noise[0].iter().zip(&z).map(|(e, &zj)| e * zj).sum();
            assert_eq!(ch.hints[0], sum);
            let base = ch.at_s(&tr.secrets[0]);
            for j in 0..6 {
                let want = reduce(&(BigInt::from(base[j].clone()) + &tr.noise[0][j]), &p.q);
                assert_eq!(ch.responses[0][j], want);
            }
        }
    }

    #[test]
    fn rejects_narrow_widths_and_plain_batches() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let p = fe_params(2, 3, 8, 0.3);
        let b = gen_first_errorless_uniform(&p, &mut rng).unwrap();
        assert!(extlwe_reduce(&b, &[1, 0, 1], 0.001, 0.01, &mut rng).is_err());
        let mut plain = b.clone();
        plain.first_errorless = false;
        assert!(extlwe_reduce(&plain, &[1, 0, 1], 0.3, 0.01, &mut rng).is_err());
        assert!(extlwe_reduce(&b, &[1, 0], 0.3, 0.01, &mut rng).is_err());
    }
}
