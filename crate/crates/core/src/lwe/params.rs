//! Parameters of LWE distributions.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};

use crate::arith::{check_modulus, check_precision, DEFAULT_PRECISION};
use crate::error::{Error, Result};

/// The error distribution `phi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NoiseSpec {
    /// Continuous Gaussian `D_alpha` reduced mod 1.
    Gaussian(f64),
    /// Deterministically zero.
    Zero,
    /// Gaussian of some unknown width `beta <= alpha`; the caller picks `beta`.
    UnknownBounded(f64),
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseSpec::Gaussian(a) | NoiseSpec::UnknownBounded(a) if !(a.is_finite() && a > 0.0) => {
                Err(Error::param("alpha", format!("noise width must be positive, got {a}")))
            }
            _ => Ok(()),
        }
    }

    /// Width parameter, zero for the zero distribution.
    pub fn alpha(&self) -> f64 {
        match *self {
            NoiseSpec::Gaussian(a) | NoiseSpec::UnknownBounded(a) => a,
            NoiseSpec::Zero => 0.0,
        }
    }
}

impl fmt::Display for NoiseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseSpec::Gaussian(a) => write!(f, "gaussian:{a}"),
            NoiseSpec::Zero => write!(f, "zero"),
            NoiseSpec::UnknownBounded(a) => write!(f, "bounded:{a}"),
        }
    }
}

impl FromStr for NoiseSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_alpha = |v: &str| {
            v.parse::<f64>()
                .map_err(|e| Error::param("noise", format!("bad width {v:?}: {e}")))
        };
        let spec = match s.split_once(':') {
            None if s == "zero" => NoiseSpec::Zero,
            Some(("gaussian", v)) => NoiseSpec::Gaussian(parse_alpha(v)?),
            Some(("bounded", v)) => NoiseSpec::UnknownBounded(parse_alpha(v)?),
            _ => {
                return Err(Error::param(
                    "noise",
                    format!("expected zero, gaussian:<alpha> or bounded:<alpha>, got {s:?}"),
                ))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Distribution of the secret vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SecretSpec {
    UniformModQ,
    Binary,
    /// `D_{Z^n, r}`.
    DiscreteGaussian(f64),
}

impl fmt::Display for SecretSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SecretSpec::UniformModQ => write!(f, "uniform"),
            SecretSpec::Binary => write!(f, "binary"),
            SecretSpec::DiscreteGaussian(r) => write!(f, "dgauss:{r}"),
        }
    }
}

impl FromStr for SecretSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "uniform" => Ok(SecretSpec::UniformModQ),
            None if s == "binary" => Ok(SecretSpec::Binary),
            Some(("dgauss", v)) => {
                let r = v
                    .parse::<f64>()
                    .map_err(|e| Error::param("secret", format!("bad width {v:?}: {e}")))?;
                if !(r.is_finite() && r > 0.0) {
                    return Err(Error::param("secret", format!("width must be positive, got {r}")));
                }
                Ok(SecretSpec::DiscreteGaussian(r))
            }
            _ => Err(Error::param(
                "secret",
                format!("expected uniform, binary or dgauss:<r>, got {s:?}"),
            )),
        }
    }
}

/// Dimension `n`, sample count `m`, modulus `q`, noise, and the fixed-point
/// precision `bits` used for the continuous `b` components.
#[derive(Clone, Debug, PartialEq)]
pub struct LweParams {
    pub n: usize,
    pub m: usize,
    pub q: BigUint,
    pub noise: NoiseSpec,
    pub bits: u32,
}

impl LweParams {
    pub fn new(n: usize, m: usize, q: impl Into<BigUint>, noise: NoiseSpec) -> Result<Self> {
        Self::with_precision(n, m, q, noise, DEFAULT_PRECISION)
    }

    pub fn with_precision(n: usize, m: usize, q: impl Into<BigUint>, noise: NoiseSpec, bits: u32) -> Result<Self> {
        let p = LweParams {
            n,
            m,
            q: q.into(),
            noise,
            bits,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::param("n", "dimension must be at least 1"));
        }
        if self.m == 0 {
            return Err(Error::param("m", "sample count must be at least 1"));
        }
        check_modulus(&self.q, "q")?;
        check_precision(self.bits)?;
        self.noise.validate()
    }
}

/// A secret vector with the distribution it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Secret {
    pub s: Vec<BigInt>,
    pub spec: SecretSpec,
}

impl Secret {
    pub fn dim(&self) -> usize {
        self.s.len()
    }

    /// Euclidean norm of the integer vector (no reduction mod q).
    pub fn norm(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.s
            .iter()
            .map(|x| x.to_f64().unwrap_or(f64::INFINITY).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}
