//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export returns a flat `Float64Array`; the layout is documented on the
//! native function it wraps.

use num_bigint::BigUint;
use wasm_bindgen::prelude::*;

use lwe_core::arith::TorusElem;
use lwe_core::gaussian::{DGauss1d, GramSchmidtData, LatticeSampler};
use lwe_core::lwe::{gen_lwe_batch, gen_secret, inner_mod_q, LweParams, NoiseSpec, SecretSpec};
use lwe_core::reductions::{mod_dim_switch, modulus_reduction_pair};
use lwe_core::seed::SeedStream;
use lwe_core::stats::pmf_1d;
use lwe_core::{Error, Result};

const MAX_SAMPLES: u32 = 1_000_000;

fn check_samples(samples: u32) -> Result<()> {
    if samples == 0 || samples > MAX_SAMPLES {
        return Err(Error::Parameter {
            field: "samples",
            reason: format!("must lie in 1..={MAX_SAMPLES}, got {samples}"),
        });
    }
    Ok(())
}

/// Histogram of `D_{Z+c,r}` as triples `(x, observed frequency, exact mass)`
/// over the support of the exact table, followed by the mean iteration count.
pub fn histogram(c: f64, r: f64, samples: u32, seed: u64) -> Result<Vec<f64>> {
    check_samples(samples)?;
    let pmf = pmf_1d(c, r)?;
    let d = DGauss1d::new(c, r)?;
    let mut rng = SeedStream::new(seed).named("histogram").rng();
    let mut counts = vec![0u64; pmf.len()];
    let mut iters = 0u64;
    for _ in 0..samples {
        let s = d.sample(&mut rng)?;
        iters += s.iterations as u64;
        if let Some(i) = pmf.lookup(&[s.offset]) {
            counts[i] += 1;
        }
    }
    let mut out = Vec::with_capacity(3 * pmf.len() + 1);
    for (i, x) in pmf.support.iter().enumerate() {
        out.extend([x[0], counts[i] as f64 / samples as f64, pmf.probs[i]]);
    }
    out.push(iters as f64 / samples as f64);
    Ok(out)
}

/// Points of `D_{L+c,r}` for the lattice spanned by the columns of
/// `[[b11, b12], [b21, b22]]`, as `x, y` pairs followed by the acceptance rate.
#[allow(clippy::too_many_arguments)]
pub fn scatter(
    b11: f64,
    b12: f64,
    b21: f64,
    b22: f64,
    r: f64,
    c1: f64,
    c2: f64,
    samples: u32,
    seed: u64,
) -> Result<Vec<f64>> {
    check_samples(samples)?;
    let gs = GramSchmidtData::from_rows(&[vec![b11, b12], vec![b21, b22]])?;
    let sampler = LatticeSampler::new(gs, r)?;
    let mut rng = SeedStream::new(seed).named("scatter").rng();
    let mut out = Vec::with_capacity(2 * samples as usize + 1);
    let mut passes = 0u64;
    for _ in 0..samples {
        let s = sampler.sample(&[c1, c2], &mut rng)?;
        passes += s.iterations as u64;
        out.extend_from_slice(&s.point);
    }
    out.push(samples as f64 / passes as f64);
    Ok(out)
}

/// Switches `samples` binary-secret LWE samples of dimension `n` from
/// modulus `q` to `q_to` and returns `[predicted sd, measured sd, r,
/// residuals...]`, where the residuals are `b - <a, s>/q_to` centered in
/// `[-1/2, 1/2)`.
pub fn switch_residuals(n: u32, q: u32, q_to: u32, alpha: f64, samples: u32, seed: u64) -> Result<Vec<f64>> {
    check_samples(samples)?;
    let n = n as usize;
    let params = LweParams::new(n, samples as usize, q, NoiseSpec::Gaussian(alpha))?;
    let seeds = SeedStream::new(seed).named("switch");
    let mut rng = seeds.rng();
    let s = gen_secret(SecretSpec::Binary, n, &params.q, &mut rng)?;
    let input = gen_lwe_batch(&params, &s, &mut rng)?;
    let b_bound = (n as f64).sqrt();
    let gp = modulus_reduction_pair(n, &BigUint::from(q_to))?;
    let out = mod_dim_switch(&input, &gp, None, b_bound, 0.0, 1.0 / (1u64 << 20) as f64, &mut rng)?;
    let tr = out.batch.transparent.as_ref().ok_or(Error::Parameter {
        field: "batch",
        reason: "switched batch lost its secret".into(),
    })?;
    let qo = &out.batch.params.q;
    let res: Vec<f64> = out
        .batch
        .samples
        .iter()
        .map(|x| {
            (x.b - TorusElem::from_ratio(&inner_mod_q(&x.a, &tr.secret, qo), qo, out.batch.params.bits).0).centered()
        })
        .collect();
    let mean = res.iter().sum::<f64>() / res.len() as f64;
    let var = res.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (res.len().max(2) - 1) as f64;
    let s_norm = s.norm();
    let predicted = (alpha * alpha + out.r * out.r * (s_norm * s_norm + b_bound * b_bound)).sqrt()
        / (2.0 * std::f64::consts::PI).sqrt();
    let mut v = vec![predicted, var.sqrt(), out.r];
    v.extend(res);
    Ok(v)
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn dgauss_histogram(c: f64, r: f64, samples: u32, seed: u64) -> std::result::Result<Vec<f64>, JsError> {
    histogram(c, r, samples, seed).map_err(js)
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn lattice_scatter(
    b11: f64,
    b12: f64,
    b21: f64,
    b22: f64,
    r: f64,
    c1: f64,
    c2: f64,
    samples: u32,
    seed: u64,
) -> std::result::Result<Vec<f64>, JsError> {
    scatter(b11, b12, b21, b22, r, c1, c2, samples, seed).map_err(js)
}

#[wasm_bindgen]
pub fn mod_switch_residuals(
    n: u32,
    q: u32,
    q_to: u32,
    alpha: f64,
    samples: u32,
    seed: u64,
) -> std::result::Result<Vec<f64>, JsError> {
    switch_residuals(n, q, q_to, alpha, samples, seed).map_err(js)
}
