//! Binary-secret LWE from extended LWE with many secrets and from plain LWE,
//! and generators for every intermediate distribution of that argument.

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{q_f64, AdvantageMap, ReductionReport};
use crate::arith::{reduce, uniform_below, TorusElem};
use crate::error::{Error, Result};
use crate::gaussian::DGauss1d;
use crate::lwe::{ExtLweChallenge, LweParams, LweSample, NoiseSpec, SampleBatch, Transparent};

/// `min(1, 2^{-(n - k log2 q)/2})`: the leftover-hash distance between
/// `(C, q C z)` and `(C, s)` for `C` in `T_q^{k x n}` and uniform binary `z`.
pub fn lhl_delta(k: usize, n: usize, q: &BigUint) -> f64 {
    let log_q = q_f64(q).log2();
    2f64.powf(-(n as f64 - k as f64 * log_q) / 2.0).min(1.0)
}

/// Least `beta` for which `-N^T z + e^` is `4 m eps`-close to a Gaussian:
/// `sqrt(2 ln(2n(1+1/eps))/pi) / q`.
pub fn binary_min_beta(n: usize, q: &BigUint, eps: f64) -> f64 {
    (2.0 * (2.0 * n as f64 * (1.0 + 1.0 / eps)).ln() / PI).sqrt() / q_f64(q)
}

fn continuous(width: f64) -> Result<Option<Normal<f64>>> {
    if width == 0.0 {
        return Ok(None);
    }
    Normal::new(0.0, width / (2.0 * PI).sqrt())
        .map(Some)
        .map_err(|e| Error::param("gamma", e.to_string()))
}

fn draw(d: &Option<Normal<f64>>, rng: &mut (impl Rng + ?Sized)) -> f64 {
    d.as_ref().map_or(0.0, |d| d.sample(rng))
}

fn binary_report(stage: &str, input: String, out: &LweParams, noise: f64, delta: f64, eps: f64) -> ReductionReport {
    ReductionReport {
        stage: stage.to_string(),
        step: "binary secret (three-way hybrid argument)",
        input,
        output: format!("n={} m={} q={} noise={}", out.n, out.m, out.q, out.noise),
        noise,
        extra: vec![("delta".to_string(), delta)],
        eps,
        advantage: AdvantageMap {
            scale: 1.0 / 3.0,
            loss: (delta + 4.0 * out.m as f64 * eps) / 3.0,
        },
    }
}

/// Maps an extended-LWE challenge with `t = m` secrets, `A` of shape `k x n`
/// and hint vector `z` to the `m` pairs `(b_i, <b_i, z> - h_i + e^_i)`, with
/// `b_i` the `i`-th response and `e^_i` drawn from `D_gamma`.
///
/// On a decoy challenge this is `(A, A^T z - N^T z + e^)` for uniform `A`; on a
/// real one it is `(A^, q B^T C z + e^)` with `A^ = q C^T B + N`.
pub fn binlwe_from_extlwe<R: Rng + ?Sized>(
    ch: &ExtLweChallenge,
    beta: f64,
    gamma: Option<f64>,
    bits: u32,
    eps: f64,
    rng: &mut R,
) -> Result<(SampleBatch, ReductionReport)> {
    let (k, n, q) = (ch.n, ch.m, &ch.q);
    let m = ch.t();
    if ch.z.iter().any(|&x| x != 0 && x != 1) {
        return Err(Error::HintSet(format!("{:?} is not a 0/1 vector", ch.z)));
    }
    if ch.hints.len() != m {
        return Err(Error::Dimension {
            what: "hints",
            expected: m,
            found: ch.hints.len(),
        });
    }
    let gamma = gamma.unwrap_or((n as f64).sqrt() * beta);
    let d = continuous(gamma)?;
    let mut samples = Vec::with_capacity(m);
    let mut noise = Vec::with_capacity(m);
    let qf = q_f64(q);
    for (resp, hint) in ch.responses.iter().zip(&ch.hints) {
        let dot: BigInt = resp
            .iter()
            .zip(&ch.z)
            .map(|(x, &zj)| BigInt::from(x.clone()) * zj)
            .sum();
        let e = draw(&d, rng);
        let exact = TorusElem::from_ratio(&reduce(&(dot - hint), q), q, bits).0;
        samples.push(LweSample {
            a: resp.clone(),
            b: exact + TorusElem::from_f64(e, bits),
        });
        noise.push(e - num_traits::ToPrimitive::to_f64(hint).unwrap_or(0.0) / qf);
    }
    let alpha = (2.0 * n as f64).sqrt() * beta;
    let params = LweParams {
        n,
        m,
        q: q.clone(),
        noise: NoiseSpec::UnknownBounded(alpha.max(gamma)),
        bits,
    };
    let report = binary_report(
        "binary-from-hints",
        format!("extLWE^{m} k={k} n={n} q={q} beta={beta}"),
        &params,
        alpha,
        lhl_delta(k, n, q),
        eps,
    );
    let batch = SampleBatch {
        params,
        samples,
        first_errorless: false,
        transparent: Some(Transparent {
            secret: ch.z.iter().map(|&x| BigInt::from(x)).collect(),
            noise,
        }),
        provenance: vec!["binary-from-hints".to_string()],
    };
    Ok((batch, report))
}

/// Maps `m` LWE samples `(B, y)` in dimension `k` to `(A^, y)` with
/// `A^ = q C^T B + N`, `C` uniform in `T_q^{k x n}`, `N` from `D_{q^{-1}Z, beta}`.
pub fn binlwe_from_lwe<R: Rng + ?Sized>(
    batch: &SampleBatch,
    n: usize,
    beta: f64,
    eps: f64,
    rng: &mut R,
) -> Result<(SampleBatch, ReductionReport)> {
    let p = &batch.params;
    let (k, q) = (p.n, &p.q);
    let c: Vec<Vec<BigUint>> = (0..k)
        .map(|_| (0..n).map(|_| uniform_below(rng, q)).collect())
        .collect();
    let dn = DGauss1d::new(0.0, q_f64(q) * beta)?;
    let mut samples = Vec::with_capacity(batch.len());
    for smp in &batch.samples {
        let a = (0..n)
            .map(|j| {
                let acc: BigInt = (0..k).map(|l| BigInt::from(&c[l][j] * &smp.a[l])).sum();
                dn.sample(rng).map(|x| reduce(&(acc + x.offset), q))
            })
            .collect::<Result<Vec<_>>>()?;
        samples.push(LweSample { a, b: smp.b });
    }
    let alpha = (2.0 * n as f64).sqrt() * beta;
    let params = LweParams {
        n,
        m: batch.len(),
        q: q.clone(),
        noise: NoiseSpec::UnknownBounded(alpha),
        bits: p.bits,
    };
    let report = binary_report(
        "binary-from-lwe",
        format!("n={k} m={} q={q} noise={}", p.m, p.noise),
        &params,
        alpha,
        lhl_delta(k, n, q),
        eps,
    );
    let mut provenance = batch.provenance.clone();
    provenance.push("binary-from-lwe".to_string());
    Ok((
        SampleBatch {
            params,
            samples,
            first_errorless: false,
            transparent: None,
            provenance,
        },
        report,
    ))
}

/// Maps an extended-LWE challenge with zero hint vector to `(b_i, u_i)` with
/// `u_i` uniform in `T`.
pub fn binlwe_zero_hint<R: Rng + ?Sized>(
    ch: &ExtLweChallenge,
    beta: f64,
    bits: u32,
    eps: f64,
    rng: &mut R,
) -> Result<(SampleBatch, ReductionReport)> {
    if ch.z.iter().any(|&x| x != 0) {
        return Err(Error::HintSet(format!("{:?} is not the zero vector", ch.z)));
    }
    let (k, n, q) = (ch.n, ch.m, &ch.q);
    let samples: Vec<LweSample> = ch
        .responses
        .iter()
        .map(|resp| LweSample {
            a: resp.clone(),
            b: TorusElem::from_raw(rng.random::<u128>(), bits),
        })
        .collect();
    let alpha = (2.0 * n as f64).sqrt() * beta;
    let params = LweParams {
        n,
        m: samples.len(),
        q: q.clone(),
        noise: NoiseSpec::UnknownBounded(alpha),
        bits,
    };
    let report = binary_report(
        "binary-zero-hint",
        format!("extLWE^{} k={k} n={n} q={q} beta={beta} z=0", ch.t()),
        &params,
        alpha,
        lhl_delta(k, n, q),
        eps,
    );
    Ok((
        SampleBatch {
            params,
            samples,
            first_errorless: false,
            transparent: None,
            provenance: vec!["binary-zero-hint".to_string()],
        },
        report,
    ))
}

/// LWE in dimension `k` to dimension `k + 1` with noise widened to `alpha`:
/// appends a uniform coordinate to each `a`, a uniform coordinate to the
/// secret, and extra Gaussian noise of width `sqrt(alpha^2 - alpha_in^2)`.
pub fn pad_dimension<R: Rng + ?Sized>(
    batch: &SampleBatch,
    alpha: f64,
    rng: &mut R,
) -> Result<(SampleBatch, ReductionReport)> {
    let p = &batch.params;
    let a_in = p.noise.alpha();
    if !(alpha.is_finite() && alpha >= a_in && alpha > 0.0) {
        return Err(Error::param(
            "alpha",
            format!("target width {alpha} must be positive and at least the input width {a_in}"),
        ));
    }
    let q = &p.q;
    let extra = continuous((alpha * alpha - a_in * a_in).sqrt())?;
    let s_new = uniform_below(rng, q);
    let mut samples = Vec::with_capacity(batch.len());
    let mut added = Vec::with_capacity(batch.len());
    for smp in &batch.samples {
        let x = uniform_below(rng, q);
        let e = draw(&extra, rng);
        let shift = TorusElem::from_ratio(&((&x * &s_new) % q), q, p.bits).0;
        let mut a = smp.a.clone();
        a.push(x);
        samples.push(LweSample {
            a,
            b: smp.b + shift + TorusElem::from_f64(e, p.bits),
        });
        added.push(e);
    }
    let transparent = batch.transparent.as_ref().map(|tr| {
        let mut secret = tr.secret.clone();
        secret.push(BigInt::from(s_new.clone()));
        Transparent {
            secret,
            noise: tr.noise.iter().zip(&added).map(|(a, b)| a + b).collect(),
        }
    });
    let params = LweParams {
        n: p.n + 1,
        noise: NoiseSpec::Gaussian(alpha),
        ..p.clone()
    };
    let report = ReductionReport {
        stage: "pad-dimension".to_string(),
        step: "one extra secret coordinate and wider noise",
        input: format!("n={} m={} q={} noise={}", p.n, p.m, q, p.noise),
        output: format!("n={} m={} q={} noise={}", params.n, params.m, q, params.noise),
        noise: alpha,
        extra: vec![],
        eps: 0.0,
        advantage: AdvantageMap::IDENTITY,
    };
    let mut provenance = batch.provenance.clone();
    provenance.push("pad-dimension".to_string());
    Ok((
        SampleBatch {
            params,
            samples,
            first_errorless: false,
            transparent,
            provenance,
        },
        report,
    ))
}

/// Parameters of the hybrid chain `H_0 .. H_5`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryHybridParams {
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub q: BigUint,
    pub beta: f64,
    /// Defaults to `sqrt(n) beta`.
    pub gamma: Option<f64>,
    pub bits: u32,
}

/// The six distributions of the binary-secret argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Hybrid {
    /// `(A, A^T z + e)`, the binary-secret LWE distribution itself.
    H0,
    /// `(A, A^T z - N^T z + e^)`.
    H1,
    /// `(A^, q B^T C z + e^)`.
    H2,
    /// `(A^, B^T s + e^)`.
    H3,
    /// `(A^, u)`.
    H4,
    /// `(A, u)`, uniform.
    H5,
}

impl Hybrid {
    pub const ALL: [Hybrid; 6] = [Hybrid::H0, Hybrid::H1, Hybrid::H2, Hybrid::H3, Hybrid::H4, Hybrid::H5];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// One draw of every hybrid from shared randomness.
#[derive(Clone, Debug)]
pub struct HybridSet {
    pub z: Vec<i64>,
    pub batches: [SampleBatch; 6],
}

impl HybridSet {
    pub fn get(&self, h: Hybrid) -> &SampleBatch {
        &self.batches[h.index()]
    }
}

/// Draws `A, z, N, e^, e, B, C, s, u` once (always in that order) and
/// assembles each hybrid from them, so that two hybrids share every
/// component they have in common.
pub fn binary_hybrids<R: Rng + ?Sized>(hp: &BinaryHybridParams, rng: &mut R) -> Result<HybridSet> {
    let (k, n, m, q) = (hp.k, hp.n, hp.m, &hp.q);
    if k == 0 || n == 0 || m == 0 {
        return Err(Error::param("k/n/m", "dimensions must be at least 1"));
    }
    if !(hp.beta.is_finite() && hp.beta > 0.0) {
        return Err(Error::param("beta", format!("must be positive, got {}", hp.beta)));
    }
    let gamma = hp.gamma.unwrap_or((n as f64).sqrt() * hp.beta);
    let bits = hp.bits;
    let uni = |rows: usize, cols: usize, rng: &mut R| -> Vec<Vec<BigUint>> {
        (0..rows)
            .map(|_| (0..cols).map(|_| uniform_below(rng, q)).collect())
            .collect()
    };
    // Matrices are stored column-major by sample: a[i] is column i.
    let a = uni(m, n, rng);
    let z: Vec<i64> = (0..n).map(|_| rng.random::<bool>() as i64).collect();
    let dn = DGauss1d::new(0.0, q_f64(q) * hp.beta)?;
    let nn: Vec<Vec<i64>> = (0..m)
        .map(|_| (0..n).map(|_| dn.sample(rng).map(|x| x.offset)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let d_hat = continuous(gamma)?;
    let e_hat: Vec<f64> = (0..m).map(|_| draw(&d_hat, rng)).collect();
    let z_norm2 = z.iter().sum::<i64>() as f64;
    let alpha_prime = (hp.beta * hp.beta * z_norm2 + gamma * gamma).sqrt();
    let d0 = continuous(alpha_prime)?;
    let e0: Vec<f64> = (0..m).map(|_| draw(&d0, rng)).collect();
    let b = uni(m, k, rng);
    let c = uni(n, k, rng);
    let s: Vec<BigUint> = (0..k).map(|_| uniform_below(rng, q)).collect();
    let u: Vec<TorusElem> = (0..m)
        .map(|_| TorusElem::from_raw(rng.random::<u128>(), bits))
        .collect();

    let frac = |num: BigInt| TorusElem::from_ratio(&reduce(&num, q), q, bits).0;
    let dot_z = |v: &[BigUint]| -> BigInt { v.iter().zip(&z).map(|(x, &zj)| BigInt::from(x.clone()) * zj).sum() };
    let a_hat: Vec<Vec<BigUint>> = (0..m)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let acc: BigInt = (0..k).map(|l| BigInt::from(&c[j][l] * &b[i][l])).sum();
                    reduce(&(acc + nn[i][j]), q)
                })
                .collect()
        })
        .collect();
    // C z as a k-vector of numerators.
    let cz: Vec<BigInt> = (0..k)
        .map(|l| (0..n).map(|j| BigInt::from(c[j][l].clone()) * z[j]).sum())
        .collect();

    let mut h: Vec<SampleBatch> = Vec::with_capacity(6);
    let params = LweParams {
        n,
        m,
        q: q.clone(),
        noise: NoiseSpec::UnknownBounded((2.0 * n as f64).sqrt() * hp.beta),
        bits,
    };
    let zs: Vec<BigInt> = z.iter().map(|&x| BigInt::from(x)).collect();
    let mut push = |name: &str, cols: &[Vec<BigUint>], bs: Vec<TorusElem>, tr: Option<Vec<f64>>| {
        h.push(SampleBatch {
            params: params.clone(),
            samples: cols
                .iter()
                .zip(bs)
                .map(|(col, bv)| LweSample { a: col.clone(), b: bv })
                .collect(),
            first_errorless: false,
            transparent: tr.map(|noise| Transparent {
                secret: zs.clone(),
                noise,
            }),
            provenance: vec![name.to_string()],
        });
    };
    let qf = q_f64(q);
    let nz: Vec<i64> = (0..m)
        .map(|i| nn[i].iter().zip(&z).map(|(x, &zj)| x * zj).sum())
        .collect();
    let h0: Vec<TorusElem> = (0..m)
        .map(|i| frac(dot_z(&a[i])) + TorusElem::from_f64(e0[i], bits))
        .collect();
    push("H0", &a, h0, Some(e0.clone()));
    let h1: Vec<TorusElem> = (0..m)
        .map(|i| frac(dot_z(&a[i]) - nz[i]) + TorusElem::from_f64(e_hat[i], bits))
        .collect();
    let h1_noise = (0..m).map(|i| e_hat[i] - nz[i] as f64 / qf).collect();
    push("H1", &a, h1, Some(h1_noise));
    let h2: Vec<TorusElem> = (0..m)
        .map(|i| {
            let num: BigInt = (0..k).map(|l| BigInt::from(b[i][l].clone()) * &cz[l]).sum();
            frac(num) + TorusElem::from_f64(e_hat[i], bits)
        })
        .collect();
    push("H2", &a_hat, h2, None);
    let h3: Vec<TorusElem> = (0..m)
        .map(|i| {
            let num: BigInt = (0..k).map(|l| BigInt::from(&b[i][l] * &s[l])).sum();
            frac(num) + TorusElem::from_f64(e_hat[i], bits)
        })
        .collect();
    push("H3", &a_hat, h3, None);
    push("H4", &a_hat, u.clone(), None);
    push("H5", &a, u, None);
    let batches: [SampleBatch; 6] = h.try_into().expect("six hybrids");
    Ok(HybridSet { z, batches })
}
