//! Modulus-dimension switching: from `T_q^n` samples with a short secret `s`
//! to `T_{q'}^{n'}` samples with secret `G s`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::gadget::{uniform_preimage, GadgetPair};
use super::{check_eps, q_f64, AdvantageMap, ReductionReport};
use crate::arith::TorusElem;
use crate::error::{Error, Result};
use crate::gaussian::LatticeSampler;
use crate::lwe::{LweParams, LweSample, NoiseSpec, SampleBatch, Transparent};

/// `max(1/q, |B~|) sqrt(2 ln(2n(1+1/eps)) / pi)`.
pub fn switch_min_r(gp: &GadgetPair, q: f64, eps: f64) -> f64 {
    let n = gp.n() as f64;
    (1.0 / q).max(gp.gs_norm()) * (2.0 * (2.0 * n * (1.0 + 1.0 / eps)).ln() / PI).sqrt()
}

/// Output of [`mod_dim_switch`].
#[derive(Clone, Debug)]
pub struct Switched {
    pub batch: SampleBatch,
    pub report: ReductionReport,
    /// Width `r` actually used.
    pub r: f64,
}

/// For each `(a, b)`: draws `f` from `D_{L - a, r}`, sets `v = a + f`, picks a
/// uniform `a'` with `G^T a' = v mod Z^n`, and outputs `(a', b + e')` with
/// `e'` from `D_{r B}`. `r = None` uses the least admissible width.
///
/// The claimed output noise bound is `sqrt(alpha^2 + 2 r^2 B^2)`, valid for
/// secrets of norm at most `b_bound`; `delta` is the probability that the
/// secret exceeds it and enters the advantage loss `delta + 14 eps m`.
pub fn mod_dim_switch<R: Rng + ?Sized>(
    batch: &SampleBatch,
    gp: &GadgetPair,
    r: Option<f64>,
    b_bound: f64,
    delta: f64,
    eps: f64,
    rng: &mut R,
) -> Result<Switched> {
    let p = &batch.params;
    check_eps(eps)?;
    if p.n != gp.n() {
        return Err(Error::Dimension {
            what: "switching matrix columns",
            expected: p.n,
            found: gp.n(),
        });
    }
    if !(b_bound.is_finite() && b_bound >= 0.0) {
        return Err(Error::param(
            "B",
            format!("secret bound must be non-negative, got {b_bound}"),
        ));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::param("delta", format!("must lie in [0, 1], got {delta}")));
    }
    let qf = q_f64(&p.q);
    let min_r = switch_min_r(gp, qf, eps);
    let r = r.unwrap_or(min_r);
    if !(r >= min_r) {
        return Err(Error::param(
            "r",
            format!("width {r} is below max(1/q, |B~|) sqrt(2 ln(2n(1+1/eps))/pi) = {min_r}"),
        ));
    }
    let sampler = LatticeSampler::new(gp.gram_schmidt().clone(), r)?;
    let extra_width = r * b_bound;
    let extra = if extra_width > 0.0 {
        Some(Normal::new(0.0, extra_width / (2.0 * PI).sqrt()).map_err(|e| Error::param("B", e.to_string()))?)
    } else {
        None
    };

    let mut samples = Vec::with_capacity(batch.len());
    let mut shifts = Vec::with_capacity(batch.len());
    for smp in &batch.samples {
        let c: Vec<f64> = smp.a.iter().map(|x| -x.to_f64().unwrap_or(0.0) / qf).collect();
        let f = sampler.sample(&c, rng)?;
        let j: Vec<BigInt> = f.coeffs.iter().map(|&x| BigInt::from(x)).collect();
        let w = gp.basis_scaled.mul_vec(&j)?;
        let a = uniform_preimage(gp, &w, rng)?;
        let e = extra.as_ref().map_or(0.0, |d| d.sample(rng));
        samples.push(LweSample {
            a,
            b: smp.b + TorusElem::from_f64(e, p.bits),
        });
        shifts.push((f.point, e));
    }

    let alpha = p.noise.alpha();
    let claimed = (alpha * alpha + 2.0 * r * r * b_bound * b_bound).sqrt();
    let mut extra_report = vec![("r".to_string(), r), ("gs_norm".to_string(), gp.gs_norm())];
    let transparent = match &batch.transparent {
        Some(tr) => {
            let secret = gp.apply(&tr.secret)?;
            let s: Vec<f64> = tr.secret.iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY)).collect();
            let s_norm = s.iter().map(|x| x * x).sum::<f64>().sqrt();
            extra_report.push(("secret_norm".to_string(), s_norm));
            extra_report.push((
                "alpha_for_secret".to_string(),
                (alpha * alpha + r * r * (s_norm * s_norm + b_bound * b_bound)).sqrt(),
            ));
            let noise = tr
                .noise
                .iter()
                .zip(&shifts)
                .map(|(e, (f, e2))| e - f.iter().zip(&s).map(|(x, y)| x * y).sum::<f64>() + e2)
                .collect();
            Some(Transparent { secret, noise })
        }
        None => None,
    };
    let params = LweParams {
        n: gp.n_prime(),
        m: batch.len(),
        q: gp.q_prime.clone(),
        noise: if claimed > 0.0 {
            NoiseSpec::UnknownBounded(claimed)
        } else {
            NoiseSpec::Zero
        },
        bits: p.bits,
    };
    let mut provenance = batch.provenance.clone();
    provenance.push("mod-dim-switch".to_string());
    let report = ReductionReport {
        stage: "mod-dim-switch".to_string(),
        step: "modulus-dimension switching",
        input: format!("n={} m={} q={} noise={}", p.n, p.m, p.q, p.noise),
        output: format!("n={} m={} q={} noise={}", params.n, params.m, params.q, params.noise),
        noise: claimed,
        extra: extra_report,
        eps,
        advantage: AdvantageMap {
            scale: 1.0,
            loss: delta + 14.0 * eps * batch.len() as f64,
        },
    };
    Ok(Switched {
        batch: SampleBatch {
            params,
            samples,
            first_errorless: false,
            transparent,
            provenance,
        },
        report,
        r,
    })
}
