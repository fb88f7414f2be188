//! Extended LWE: LWE with leaked inner products `<e_i, z>` of the noise.

use num_bigint::{BigInt, BigUint};
use rand::Rng;

use super::params::NoiseSpec;
use crate::arith::{check_modulus, reduce, uniform_below};
use crate::error::{Error, Result};
use crate::gaussian::DGauss1d;

/// Admissible hint vectors `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HintSet {
    /// `{0,1}^m`.
    Binary,
    /// Any integer vector; no quality certificate is available.
    Integer,
}

impl HintSet {
    pub fn check(&self, z: &[i64]) -> Result<()> {
        match self {
            HintSet::Binary if z.iter().any(|&x| x != 0 && x != 1) => {
                Err(Error::HintSet(format!("{z:?} is not a 0/1 vector")))
            }
            _ => Ok(()),
        }
    }
}

/// Shape of an extended-LWE instance.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtLweParams {
    pub n: usize,
    pub m: usize,
    pub q: BigUint,
    /// Width of the discrete noise `D_{q^{-1} Z^m, alpha}` (or zero noise).
    pub chi: NoiseSpec,
    /// Number of secrets.
    pub t: usize,
    pub hint_set: HintSet,
}

impl ExtLweParams {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 || self.t == 0 {
            return Err(Error::param("n/m/t", "dimensions must be at least 1"));
        }
        check_modulus(&self.q, "q")?;
        if let NoiseSpec::UnknownBounded(_) = self.chi {
            return Err(Error::param("chi", "extended LWE needs a fixed noise width"));
        }
        self.chi.validate()
    }
}

/// Generating data of a challenge, for exact checks.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtLweTransparent {
    pub secrets: Vec<Vec<BigInt>>,
    /// Noise vectors `e_i` as integer numerators over `q` (so `e_i = noise_i / q`).
    pub noise: Vec<Vec<BigInt>>,
}

/// `(A, b_1..b_t, <e_1,z>..<e_t,z>)` with everything stored as numerators over `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtLweChallenge {
    pub n: usize,
    pub m: usize,
    pub q: BigUint,
    /// `n x m` matrix, row-major, entries in `[0, q)`.
    pub a: Vec<Vec<BigUint>>,
    /// `t` response vectors in `T_q^m`.
    pub responses: Vec<Vec<BigUint>>,
    /// Hint numerators: hint `i` is `hints[i] / q`, an element of `q^{-1} Z`.
    pub hints: Vec<BigInt>,
    pub z: Vec<i64>,
    pub transparent: Option<ExtLweTransparent>,
}

impl ExtLweChallenge {
    pub fn t(&self) -> usize {
        self.responses.len()
    }

    /// `A^T s mod q`, the noiseless response for secret `s`.
    pub fn at_s(&self, s: &[BigInt]) -> Vec<BigUint> {
        (0..self.m)
            .map(|j| {
                let acc: BigInt = (0..self.n).map(|k| BigInt::from(self.a[k][j].clone()) * &s[k]).sum();
                reduce(&acc, &self.q)
            })
            .collect()
    }

    pub fn opaque(mut self) -> Self {
        self.transparent = None;
        self
    }
}

fn noise_numerators<R: Rng + ?Sized>(chi: NoiseSpec, q: &BigUint, m: usize, rng: &mut R) -> Result<Vec<BigInt>> {
    match chi {
        NoiseSpec::Zero => Ok(vec![BigInt::from(0); m]),
        NoiseSpec::Gaussian(alpha) => {
            use num_traits::ToPrimitive;
            let qf = q.to_f64().unwrap_or(f64::INFINITY);
            let d = DGauss1d::new(0.0, qf * alpha)?;
            (0..m).map(|_| d.sample(rng).map(|s| BigInt::from(s.offset))).collect()
        }
        NoiseSpec::UnknownBounded(_) => Err(Error::param("chi", "extended LWE needs a fixed noise width")),
    }
}

/// Hybrid challenge: the first `i_star` responses are LWE, the rest uniform;
/// hints always come from real noise.
///
/// Every component is drawn for every index regardless of `i_star`, so two
/// hybrids generated from the same seed agree on everything except the
/// responses whose index lies between their `i_star` values.
pub fn gen_hybrid_extlwe<R: Rng + ?Sized>(
    i_star: usize,
    params: &ExtLweParams,
    z: &[i64],
    rng: &mut R,
) -> Result<ExtLweChallenge> {
    params.validate()?;
    if i_star > params.t {
        return Err(Error::param("i_star", format!("must be at most t = {}", params.t)));
    }
    if z.len() != params.m {
        return Err(Error::Dimension {
            what: "hint vector",
            expected: params.m,
            found: z.len(),
        });
    }
    params.hint_set.check(z)?;
    let (n, m, q) = (params.n, params.m, &params.q);
    let a: Vec<Vec<BigUint>> = (0..n)
        .map(|_| (0..m).map(|_| uniform_below(rng, q)).collect())
        .collect();
    let mut ch = ExtLweChallenge {
        n,
        m,
        q: q.clone(),
        a,
        responses: Vec::with_capacity(params.t),
        hints: Vec::with_capacity(params.t),
        z: z.to_vec(),
        transparent: None,
    };
    let mut secrets = Vec::with_capacity(params.t);
    let mut noises = Vec::with_capacity(params.t);
    for i in 0..params.t {
        let s: Vec<BigInt> = (0..n).map(|_| BigInt::from(uniform_below(rng, q))).collect();
        let e = noise_numerators(params.chi, q, m, rng)?;
        let u: Vec<BigUint> = (0..m).map(|_| uniform_below(rng, q)).collect();
        let hint: BigInt = e.iter().zip(z).map(|(ej, &zj)| ej * zj).sum();
        let response = if i < i_star {
            ch.at_s(&s)
                .into_iter()
                .zip(&e)
                .map(|(x, ej)| reduce(&(BigInt::from(x) + ej), q))
                .collect()
        } else {
            u
        };
        ch.responses.push(response);
        ch.hints.push(hint);
        secrets.push(s);
        noises.push(e);
    }
    ch.transparent = Some(ExtLweTransparent { secrets, noise: noises });
    Ok(ch)
}

/// Real (`real = true`) or decoy extended-LWE challenge.
pub fn gen_extlwe_challenge<R: Rng + ?Sized>(
    params: &ExtLweParams,
    z: &[i64],
    real: bool,
    rng: &mut R,
) -> Result<ExtLweChallenge> {
    gen_hybrid_extlwe(if real { params.t } else { 0 }, params, z, rng)
}
