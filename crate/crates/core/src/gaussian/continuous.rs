//! Continuous Gaussians `D_B`, the law of `B x` with `x` drawn from `D_1^k`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

/// A factor `B` (`m x k`) whose Gaussian `D_B` has covariance `B B^T / (2 pi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceFactor {
    b: DMatrix<f64>,
}

impl CovarianceFactor {
    pub fn new(b: DMatrix<f64>) -> Self {
        CovarianceFactor { b }
    }

    /// `r I_m`, the spherical Gaussian of width `r`.
    pub fn spherical(m: usize, r: f64) -> Self {
        CovarianceFactor {
            b: DMatrix::identity(m, m) * r,
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.b.nrows()
    }

    /// `B B^T`.
    pub fn gram(&self) -> DMatrix<f64> {
        &self.b * self.b.transpose()
    }
}

/// One draw from `D_B`.
pub fn sample_cont_gauss<R: Rng + ?Sized>(b: &CovarianceFactor, rng: &mut R) -> Vec<f64> {
    let k = b.b.ncols();
    let unit = Normal::new(0.0, 1.0 / (2.0 * std::f64::consts::PI).sqrt()).expect("positive standard deviation");
    let x = DVector::from_fn(k, |_, _| unit.sample(rng));
    (&b.b * x).iter().copied().collect()
}

/// Symmetric square root of a positive semidefinite matrix.
///
/// Eigenvalues down to `-1e-9 |M|` are treated as rounding noise and clamped
/// to zero; anything more negative is rejected.
pub fn psd_sqrt(m: &DMatrix<f64>) -> Result<CovarianceFactor> {
    let (r, c) = m.shape();
    if r != c {
        return Err(Error::Dimension {
            what: "psd_sqrt of non-square matrix",
            expected: r,
            found: c,
        });
    }
    let scale = m.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let asym = (m - m.transpose()).iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if asym > 1e-12 * scale.max(1.0) {
        return Err(Error::param(
            "M",
            format!("matrix is not symmetric (max asymmetry {asym:e})"),
        ));
    }
    if scale == 0.0 {
        return Ok(CovarianceFactor::new(DMatrix::zeros(r, r)));
    }
    let eig = SymmetricEigen::new(m.clone());
    let norm = eig.eigenvalues.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let tol = 1e-9 * norm;
    let mut roots = eig.eigenvalues.clone();
    for lambda in roots.iter_mut() {
        if *lambda < -tol {
            return Err(Error::NotPsd {
                eigenvalue: *lambda,
                tolerance: tol,
            });
        }
        *lambda = lambda.max(0.0).sqrt();
    }
    let v = &eig.eigenvectors;
    let b = v * DMatrix::from_diagonal(&roots) * v.transpose();
    Ok(CovarianceFactor::new(b))
}
