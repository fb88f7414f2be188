//! From extended LWE with one secret to extended LWE with `t` secrets.

use num_bigint::{BigInt, BigUint};
use rand::Rng;

use super::{q_f64, AdvantageMap, ReductionReport};
use crate::arith::{reduce, uniform_below};
use crate::error::{Error, Result};
use crate::gaussian::DGauss1d;
use crate::lwe::{ExtLweChallenge, ExtLweTransparent, NoiseSpec};

/// Embeds a one-secret challenge at a uniformly random position `i*` in
/// `1..=t`: responses before it are fresh LWE vectors against the same `A`
/// (with noise from `chi` and their true hints), responses after it are
/// uniform with hints from fresh noise. Returns the challenge and `i*`.
///
/// A real input yields hybrid `i*`, a uniform one hybrid `i* - 1`.
pub fn multi_secret_reduce<R: Rng + ?Sized>(
    single: &ExtLweChallenge,
    chi: NoiseSpec,
    t: usize,
    rng: &mut R,
) -> Result<(ExtLweChallenge, usize, ReductionReport)> {
    if single.t() != 1 {
        return Err(Error::param(
            "t",
            format!("input must have one secret, has {}", single.t()),
        ));
    }
    if t == 0 {
        return Err(Error::param("t", "need at least one secret"));
    }
    let width = match chi {
        NoiseSpec::Gaussian(a) => a,
        other => return Err(Error::param("chi", format!("need a Gaussian noise width, got {other}"))),
    };
    let (n, m, q) = (single.n, single.m, &single.q);
    let d = DGauss1d::new(0.0, q_f64(q) * width)?;
    let i_star = rng.random_range(1..=t);

    let mut ch = ExtLweChallenge {
        n,
        m,
        q: q.clone(),
        a: single.a.clone(),
        responses: Vec::with_capacity(t),
        hints: Vec::with_capacity(t),
        z: single.z.clone(),
        transparent: None,
    };
    let mut secrets = Vec::with_capacity(t);
    let mut noises = Vec::with_capacity(t);
    for i in 1..=t {
        if i == i_star {
            ch.responses.push(single.responses[0].clone());
            ch.hints.push(single.hints[0].clone());
            let tr = single.transparent.as_ref();
            secrets.push(tr.map_or_else(|| vec![BigInt::from(0); n], |tr| tr.secrets[0].clone()));
            noises.push(tr.map_or_else(|| vec![BigInt::from(0); m], |tr| tr.noise[0].clone()));
            continue;
        }
        let s: Vec<BigInt> = (0..n).map(|_| BigInt::from(uniform_below(rng, q))).collect();
        let e: Vec<BigInt> = (0..m)
            .map(|_| d.sample(rng).map(|x| BigInt::from(x.offset)))
            .collect::<Result<_>>()?;
        let hint: BigInt = e.iter().zip(&ch.z).map(|(ej, &zj)| ej * zj).sum();
        let response: Vec<BigUint> = if i < i_star {
            ch.at_s(&s)
                .into_iter()
                .zip(&e)
                .map(|(x, ej)| reduce(&(BigInt::from(x) + ej), q))
                .collect()
        } else {
            (0..m).map(|_| uniform_below(rng, q)).collect()
        };
        ch.responses.push(response);
        ch.hints.push(hint);
        secrets.push(s);
        noises.push(e);
    }
    if single.transparent.is_some() {
        ch.transparent = Some(ExtLweTransparent { secrets, noise: noises });
    }
    let report = ReductionReport {
        stage: "multi-secret".to_string(),
        step: "one secret to many by a hybrid over the secrets",
        input: format!("n={n} m={m} q={q} t=1 chi={chi}"),
        output: format!("n={n} m={m} q={q} t={t} chi={chi}"),
        noise: width,
        extra: vec![("i_star".to_string(), i_star as f64)],
        eps: 0.0,
        advantage: AdvantageMap {
            scale: 1.0 / t as f64,
            loss: 0.0,
        },
    };
    Ok((ch, i_star, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lwe::{gen_extlwe_challenge, ExtLweParams, HintSet};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn real_input_gives_real_prefix() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let params = ExtLweParams {
            n: 2,
            m: 3,
            q: BigUint::from(16u8),
            chi: NoiseSpec::Gaussian(0.2),
            t: 1,
            hint_set: HintSet::Binary,
        };
        let mut seen = [false; 5];
        for _ in 0..200 {
            let single = gen_extlwe_challenge(&params, &[1, 0, 1], true, &mut rng).unwrap();
            let (ch, i_star, rep) = multi_secret_reduce(&single, params.chi, 4, &mut rng).unwrap();
            seen[i_star] = true;
            assert_eq!(rep.advantage.scale, 0.25);
            let tr = ch.transparent.as_ref().unwrap();
            for i in 0..i_star {
                let base = ch.at_s(&tr.secrets[i]);
                for j in 0..3 {
                    let want = reduce(&(BigInt::from(base[j].clone()) + &tr.noise[i][j]), &ch.q);
                    assert_eq!(ch.responses[i][j], want);
                }
                let h: BigInt = tr.noise[i][0].clone() + &tr.noise[i][2];
                assert_eq!(ch.hints[i], h);
            }
            assert_eq!(ch.responses[i_star - 1], single.responses[0]);
        }
        assert!(seen[1..].iter().all(|&x| x));
    }
}
