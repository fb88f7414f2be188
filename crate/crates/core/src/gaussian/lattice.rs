//! Exact sampling from `D_{L+c, r}` for a lattice `L` given by a basis.

use std::f64::consts::PI;

use nalgebra::DVector;
use rand::Rng;

use super::sampler1d::sample_dgauss_scaled;
use super::theta::theta_coset;
use super::{GramSchmidtData, DEFAULT_ITERATION_CAP, THETA_BITS};
use crate::error::{Error, Result};

/// A point `c + B j` of the coset together with its basis coefficients `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSample {
    pub point: Vec<f64>,
    pub coeffs: Vec<i64>,
    /// Number of nearest-plane passes until one was accepted.
    pub iterations: u32,
}

/// Randomized nearest-plane sampler followed by a rejection step that removes
/// its bias.
///
/// One pass walks `i = n, ..., 1`, drawing the coordinate along the `i`-th
/// Gram-Schmidt direction from the one-dimensional sampler on the coset
/// `|b~_i| Z + <c_i, b~_i / |b~_i|>`. The pass is kept with probability
/// `prod_i rho_r(|b~_i| Z + <c_i, .>) / prod_i rho_r(|b~_i| Z)`, which makes
/// the output exactly `D_{L+c, r}`. When `r >= |B~| sqrt(ln(2n+4)/pi)` every
/// pass is kept with probability above `e^{-2}`.
#[derive(Clone, Debug)]
pub struct LatticeSampler {
    gs: GramSchmidtData,
    r: f64,
    theta_zero: Vec<f64>,
    cap: u32,
}

impl LatticeSampler {
    pub fn new(gs: GramSchmidtData, r: f64) -> Result<Self> {
        Self::with_cap(gs, r, DEFAULT_ITERATION_CAP)
    }

    pub fn with_cap(gs: GramSchmidtData, r: f64, cap: u32) -> Result<Self> {
        let n = gs.dim() as f64;
        let need = gs.max_norm() * ((2.0 * n + 4.0).ln() / PI).sqrt();
        if !(r.is_finite() && r >= need) {
            return Err(Error::param(
                "r",
                format!("width {r} is below |B~| sqrt(ln(2n+4)/pi) = {need}"),
            ));
        }
        let theta_zero = gs
            .norms()
            .iter()
            .map(|&s| theta_coset(0.0, r / s, THETA_BITS))
            .collect();
        Ok(LatticeSampler { gs, r, theta_zero, cap })
    }

    pub fn gram_schmidt(&self) -> &GramSchmidtData {
        &self.gs
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn sample<R: Rng + ?Sized>(&self, c: &[f64], rng: &mut R) -> Result<LatticeSample> {
        let d = self.gs.ambient_dim();
        if c.len() != d {
            return Err(Error::Dimension {
                what: "lattice coset representative",
                expected: d,
                found: c.len(),
            });
        }
        let n = self.gs.dim();
        let basis = self.gs.basis();
        let dirs = self.gs.directions();
        let norms = self.gs.norms();
        let c0 = DVector::from_column_slice(c);
        for it in 1..=self.cap {
            let mut ci = c0.clone();
            let mut coeffs = vec![0i64; n];
            let mut ratio = 1.0;
            for i in (0..n).rev() {
                let s = norms[i];
                let t = dirs.column(i).dot(&ci);
                let (j, v, _) = sample_dgauss_scaled(t, s, self.r, self.cap, rng)?;
                coeffs[i] = j;
                ci += basis.column(i) * (j as f64);
                ci -= dirs.column(i) * v;
                let u = t / s;
                ratio *= theta_coset(u - u.floor(), self.r / s, THETA_BITS) / self.theta_zero[i];
            }
            if rng.random::<f64>() < ratio {
                let mut point = c0.clone();
                for (i, &j) in coeffs.iter().enumerate() {
                    point += basis.column(i) * (j as f64);
                }
                return Ok(LatticeSample {
                    point: point.iter().copied().collect(),
                    coeffs,
                    iterations: it,
                });
            }
        }
        Err(Error::IterationCap {
            what: "lattice discrete Gaussian",
            cap: self.cap,
        })
    }
}

/// One draw from `D_{L+c, r}`; see [`LatticeSampler`].
pub fn sample_dgauss_lattice<R: Rng + ?Sized>(
    gs: &GramSchmidtData,
    c: &[f64],
    r: f64,
    rng: &mut R,
) -> Result<LatticeSample> {
    LatticeSampler::new(gs.clone(), r)?.sample(c, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn integer_lattice_always_accepts() {
        let gs = GramSchmidtData::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let sampler = LatticeSampler::new(gs, 2.0).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        for _ in 0..1000 {
            let s = sampler.sample(&[0.0, 0.0], &mut rng).unwrap();
            assert_eq!(s.iterations, 1);
            assert_eq!(s.point, vec![s.coeffs[0] as f64, s.coeffs[1] as f64]);
        }
    }

    #[test]
    fn output_lies_in_coset() {
        let gs = GramSchmidtData::from_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap();
        let sampler = LatticeSampler::new(gs.clone(), 3.0).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        let c = [0.3, -0.2];
        for _ in 0..500 {
            let s = sampler.sample(&c, &mut rng).unwrap();
            let b = gs.basis();
            for k in 0..2 {
                let expect = c[k] + b[(k, 0)] * s.coeffs[0] as f64 + b[(k, 1)] * s.coeffs[1] as f64;
                assert!((s.point[k] - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_narrow_width() {
        let gs = GramSchmidtData::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        // sqrt(ln 8 / pi) ~ 0.816
        assert!(LatticeSampler::new(gs.clone(), 0.8).is_err());
        assert!(LatticeSampler::new(gs, 0.82).is_ok());
    }
}
