//! Gaussian functions, theta series and exact discrete Gaussian samplers.
//!
//! Widths follow the convention `rho_r(x) = exp(-pi |x|^2 / r^2)`, so a
//! continuous Gaussian of width `r` has per-coordinate standard deviation
//! `r / sqrt(2 pi)`.

mod continuous;
mod gram_schmidt;
mod lattice;
mod sampler1d;
mod theta;

pub use continuous::{psd_sqrt, sample_cont_gauss, CovarianceFactor};
pub use gram_schmidt::{smoothing_bound, GramSchmidtData};
pub use lattice::{sample_dgauss_lattice, LatticeSample, LatticeSampler};
pub use sampler1d::{sample_dgauss_1d, sample_dgauss_scaled, DGauss1d, Sample1d};
pub use theta::{theta_coset, theta_direct, theta_poisson};

use crate::error::{Error, Result};

/// Default cap on rejection-loop iterations before a sampler gives up.
pub const DEFAULT_ITERATION_CAP: u32 = 10_000;

/// Default bits of accuracy for theta-series evaluation.
pub const THETA_BITS: u32 = 60;

/// A Gaussian width `r > 0`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct GaussParam(f64);

impl GaussParam {
    pub fn new(r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::param(
                "r",
                format!("Gaussian width must be positive and finite, got {r}"),
            ));
        }
        Ok(GaussParam(r))
    }

    pub fn r(self) -> f64 {
        self.0
    }

    /// Standard deviation of each coordinate of the continuous Gaussian.
    pub fn std_dev(self) -> f64 {
        self.0 / (2.0 * std::f64::consts::PI).sqrt()
    }
}

/// `exp(-pi |x|^2 / r^2)`.
pub fn rho(x: &[f64], r: GaussParam) -> f64 {
    let n2: f64 = x.iter().map(|v| v * v).sum();
    (-std::f64::consts::PI * n2 / (r.0 * r.0)).exp()
}

pub(crate) fn rho1(x: f64, r: f64) -> f64 {
    (-std::f64::consts::PI * x * x / (r * r)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_examples() {
        let e = (-std::f64::consts::PI).exp();
        assert_eq!(rho(&[0.0, 0.0], GaussParam::new(0.3).unwrap()), 1.0);
        assert!((rho(&[1.0], GaussParam::new(1.0).unwrap()) - 0.0432139).abs() < 1e-7);
        assert!((rho(&[1.0, 1.0], GaussParam::new(2f64.sqrt()).unwrap()) - e).abs() < 1e-15);
        assert!(GaussParam::new(0.0).is_err());
        assert!(GaussParam::new(f64::NAN).is_err());
    }
}
