//! Brute-force probability tables for discrete Gaussians on low-dimensional cosets.

use std::collections::HashMap;
use std::f64::consts::{E, PI};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Default enumeration radius in units of `r`.
pub const DEFAULT_RADIUS_MULT: f64 = 12.0;

/// Finite table of a distribution on `L + c`: points, their basis
/// coefficients and normalized masses.
#[derive(Clone, Debug)]
pub struct PmfTable {
    pub support: Vec<Vec<f64>>,
    pub coeffs: Vec<Vec<i64>>,
    pub probs: Vec<f64>,
    /// Upper bound on the mass outside the enumerated ball.
    pub truncation_mass_bound: f64,
    /// Unnormalized `rho_r` mass of the enumerated points.
    pub normalizer: f64,
    index: HashMap<Vec<i64>, usize>,
}

impl PmfTable {
    /// Builds a table from explicit masses (normalized here).
    pub fn from_masses(coeffs: Vec<Vec<i64>>, support: Vec<Vec<f64>>, masses: Vec<f64>) -> Result<Self> {
        if coeffs.len() != masses.len() || support.len() != masses.len() {
            return Err(Error::Dimension {
                what: "pmf support",
                expected: masses.len(),
                found: coeffs.len().min(support.len()),
            });
        }
        if masses.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::param("probs", "masses must be finite and nonnegative"));
        }
        let total = sorted_sum(&masses);
        if !(total > 0.0) {
            return Err(Error::param("probs", "total mass is zero"));
        }
        let probs = masses.iter().map(|p| p / total).collect();
        let index = coeffs.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        Ok(PmfTable {
            support,
            coeffs,
            probs,
            truncation_mass_bound: 0.0,
            normalizer: total,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Position of the point with basis coefficients `j`.
    pub fn lookup(&self, j: &[i64]) -> Option<usize> {
        self.index.get(j).copied()
    }

    pub fn prob(&self, j: &[i64]) -> f64 {
        self.lookup(j).map_or(0.0, |i| self.probs[i])
    }
}

pub(crate) fn sorted_sum(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v.iter().sum()
}

/// Points `c + B j` (columns of `basis`) with `|c + B j| <= radius`, with
/// their coefficients.
fn enumerate_ball(basis: &DMatrix<f64>, c: &DVector<f64>, radius: f64) -> Result<Vec<(Vec<i64>, Vec<f64>)>> {
    let n = basis.ncols();
    let inv = basis
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::param("basis", "basis matrix is singular"))?;
    let shift = &inv * c;
    let ranges: Vec<(i64, i64)> = (0..n)
        .map(|i| {
            let w = inv.row(i).norm() * radius;
            ((-shift[i] - w).floor() as i64, (-shift[i] + w).ceil() as i64)
        })
        .collect();
    let mut out = Vec::new();
    let mut j: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        let jv = DVector::from_iterator(n, j.iter().map(|&x| x as f64));
        let v = c + basis * jv;
        if v.norm() <= radius {
            out.push((j.clone(), v.iter().copied().collect()));
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out);
            }
            if j[i] < ranges[i].1 {
                j[i] += 1;
                break;
            }
            j[i] = ranges[i].0;
            i += 1;
        }
    }
}

/// Enumerates `D_{L+c, r}` for the lattice spanned by the columns of `basis`
/// over the ball of radius `radius_mult * r` around the origin.
///
/// The truncation bound uses the Gaussian tail estimate
/// `rho_r((L+c) \ tr sqrt(n) B) <= 2 (t sqrt(2 pi e) e^{-pi t^2})^n rho_r(L)`.
pub fn brute_force_pmf(basis: &DMatrix<f64>, c: &[f64], r: f64, radius_mult: Option<f64>) -> Result<PmfTable> {
    let n = basis.ncols();
    if n == 0 || n > 3 || basis.nrows() != n {
        return Err(Error::TooLarge(format!(
            "brute-force pmf needs a square basis of dimension 1..=3, got {}x{n}",
            basis.nrows()
        )));
    }
    if c.len() != n {
        return Err(Error::Dimension {
            what: "coset representative",
            expected: n,
            found: c.len(),
        });
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::param("r", format!("must be positive, got {r}")));
    }
    let mult = radius_mult.unwrap_or(DEFAULT_RADIUS_MULT);
    if !(mult > 0.0) {
        return Err(Error::param("radius_mult", "must be positive"));
    }
    let radius = mult * r;
    let rho = |v: &[f64]| (-PI * v.iter().map(|x| x * x).sum::<f64>() / (r * r)).exp();
    let pts = enumerate_ball(basis, &DVector::from_column_slice(c), radius)?;
    let masses: Vec<f64> = pts.iter().map(|(_, v)| rho(v)).collect();
    let (coeffs, support): (Vec<_>, Vec<_>) = pts.into_iter().unzip();
    let mut table = PmfTable::from_masses(coeffs, support, masses)?;

    let t = mult / (n as f64).sqrt();
    if t >= 1.0 / (2.0 * PI).sqrt() {
        let zero: Vec<f64> = enumerate_ball(basis, &DVector::zeros(n), radius)?
            .iter()
            .map(|(_, v)| rho(v))
            .collect();
        let tail = 2.0 * (t * (2.0 * PI * E).sqrt() * (-PI * t * t).exp()).powi(n as i32);
        let lattice_mass = sorted_sum(&zero) / (1.0 - tail);
        table.truncation_mass_bound = tail * lattice_mass / table.normalizer;
    } else {
        table.truncation_mass_bound = 1.0;
    }
    Ok(table)
}

/// Table of `D_{Z+c, r}` indexed by the integer offset `k` of `c + k`.
pub fn pmf_1d(c: f64, r: f64) -> Result<PmfTable> {
    brute_force_pmf(&DMatrix::from_element(1, 1, 1.0), &[c], r, None)
}
