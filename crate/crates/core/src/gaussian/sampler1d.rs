//! Exact sampling from `D_{Z+c, r}` by rejection from the continuous Gaussian.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use statrs::function::erf::erfc;

use super::{rho1, DEFAULT_ITERATION_CAP};
use crate::error::{Error, Result};

/// One draw `y = c + offset` together with the number of loop iterations used.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample1d {
    pub offset: i64,
    pub value: f64,
    pub iterations: u32,
}

/// Precomputed sampler for a fixed coset `Z + c` and width `r`.
///
/// Each round outputs `c` with probability `rho(c)/Z`, `c - 1` with
/// probability `rho(c-1)/Z`, and otherwise draws a continuous proposal from
/// one of the two tails `[c, inf)` or `(-inf, c-1]`, moves it outward to the
/// next coset point and keeps it with probability `rho(y)/rho(x)`. Here
/// `Z = Z_0 + Z_1 + rho(c) + rho(c-1)` with `Z_0, Z_1` the tail integrals.
/// Rounds that output nothing are repeated; each round terminates with
/// probability at least 1/2.
///
/// The continuous proposal and the tail integrals are computed in `f64`, so
/// the sampler is exact up to double-precision rounding of those quantities.
#[derive(Clone, Debug)]
pub struct DGauss1d {
    c: f64,
    r: f64,
    sigma: f64,
    p_c: f64,
    p_cm1: f64,
    p_right: f64,
    cap: u32,
}

impl DGauss1d {
    pub fn new(c: f64, r: f64) -> Result<Self> {
        Self::with_cap(c, r, DEFAULT_ITERATION_CAP)
    }

    pub fn with_cap(c: f64, r: f64, cap: u32) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::param("r", format!("width must be positive, got {r}")));
        }
        if !(0.0..1.0).contains(&c) {
            return Err(Error::param(
                "c",
                format!("coset representative must lie in [0, 1), got {c}"),
            ));
        }
        let sp = PI.sqrt();
        let z0 = 0.5 * r * erfc(sp * c / r);
        let z1 = 0.5 * r * erfc(sp * (1.0 - c) / r);
        let rc = rho1(c, r);
        let rcm1 = rho1(c - 1.0, r);
        let z = z0 + z1 + rc + rcm1;
        if !(z.is_finite() && z > 0.0) {
            return Err(Error::param(
                "r",
                format!("width {r} is too small for coset offset {c}: normalizer underflows"),
            ));
        }
        Ok(DGauss1d {
            c,
            r,
            sigma: r / (2.0 * PI).sqrt(),
            p_c: rc / z,
            p_cm1: rcm1 / z,
            p_right: z0 / z,
            cap,
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Sample1d> {
        let c = self.c;
        for it in 1..=self.cap {
            let u: f64 = rng.random();
            let done = |offset: i64| Sample1d {
                offset,
                value: c + offset as f64,
                iterations: it,
            };
            if u < self.p_c {
                return Ok(done(0));
            }
            if u < self.p_c + self.p_cm1 {
                return Ok(done(-1));
            }
            let (x, k) = if u < self.p_c + self.p_cm1 + self.p_right {
                let x = self.sigma * std_normal_tail(c / self.sigma, rng);
                (x, (x - c).floor() as i64 + 1)
            } else {
                let x = -self.sigma * std_normal_tail((1.0 - c) / self.sigma, rng);
                (x, (x - c).ceil() as i64 - 1)
            };
            let y = c + k as f64;
            let accept = (-PI * (y * y - x * x) / (self.r * self.r)).exp();
            if rng.random::<f64>() < accept {
                return Ok(done(k));
            }
        }
        Err(Error::IterationCap {
            what: "one-dimensional discrete Gaussian",
            cap: self.cap,
        })
    }
}

/// Standard normal conditioned on `z >= a`, for `a >= 0`.
fn std_normal_tail<R: Rng + ?Sized>(a: f64, rng: &mut R) -> f64 {
    if a < 0.75 {
        loop {
            let z: f64 = StandardNormal.sample(rng);
            let z = z.abs();
            if z >= a {
                return z;
            }
        }
    }
    // Marsaglia's tail method.
    loop {
        let u1 = 1.0 - rng.random::<f64>();
        let u2: f64 = rng.random();
        let x = (a * a - 2.0 * u1.ln()).sqrt();
        if u2 * x <= a {
            return x;
        }
    }
}

/// Draws from `D_{Z+c, r}` for any real `c`; `offset` is relative to `c mod 1`.
pub fn sample_dgauss_1d<R: Rng + ?Sized>(c: f64, r: f64, rng: &mut R) -> Result<Sample1d> {
    let frac = c - c.floor();
    let frac = if frac >= 1.0 { 0.0 } else { frac };
    DGauss1d::new(frac, r)?.sample(rng)
}

/// Draws `v` from `D_{sZ + t, r}` and returns `(j, v, iterations)` with `v = s j + t`.
pub fn sample_dgauss_scaled<R: Rng + ?Sized>(t: f64, s: f64, r: f64, cap: u32, rng: &mut R) -> Result<(i64, f64, u32)> {
    let u = t / s;
    let mut fl = u.floor();
    let mut gamma = u - fl;
    if gamma >= 1.0 {
        gamma = 0.0;
        fl += 1.0;
    }
    let d = DGauss1d::with_cap(gamma, r / s, cap)?;
    let y = d.sample(rng)?;
    let j = y.offset - fl as i64;
    Ok((j, s * (gamma + y.offset as f64), y.iterations))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::theta_coset;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn centered_mass_at_zero() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let d = DGauss1d::new(0.0, 1.0).unwrap();
        let n = 200_000;
        let zeros = (0..n).filter(|_| d.sample(&mut rng).unwrap().offset == 0).count();
        let p = 1.0 / theta_coset(0.0, 1.0, 60);
        assert!((p - 0.92045).abs() < 1e-5);
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!(((zeros as f64 / n as f64) - p).abs() < 4.0 * se);
    }

    #[test]
    fn half_coset_symmetric() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let n = 100_000;
        let mut plus = 0i64;
        let mut minus = 0i64;
        for _ in 0..n {
            let v = sample_dgauss_1d(0.5, 1.0, &mut rng).unwrap().value;
            plus += (v == 0.5) as i64;
            minus += (v == -0.5) as i64;
        }
        let se = ((plus + minus) as f64).sqrt();
        assert!(((plus - minus) as f64).abs() < 4.0 * se);
    }

    #[test]
    fn scaled_coset_membership() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for &(t, s) in &[(0.3, 0.25), (-1.7, 0.5), (2.2, 1.0 / 8.0)] {
            for _ in 0..100 {
                let (j, v, _) = sample_dgauss_scaled(t, s, 0.7, 10_000, &mut rng).unwrap();
                assert!((v - (s * j as f64 + t)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(DGauss1d::new(1.0, 1.0).is_err());
        assert!(DGauss1d::new(0.2, 0.0).is_err());
        assert!(DGauss1d::new(0.5, 1e-3).is_err());
    }

    #[test]
    fn narrow_width_still_exact() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        // All mass sits on c and c - 1 in proportion rho(c) : rho(c-1).
        let d = DGauss1d::new(0.4, 0.3).unwrap();
        let n = 100_000;
        let zero = (0..n).filter(|_| d.sample(&mut rng).unwrap().offset == 0).count();
        let a = rho1(0.4, 0.3);
        let b = rho1(-0.6, 0.3);
        let p = a / (a + b);
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((zero as f64 / n as f64 - p).abs() < 4.0 * se);
    }
}
