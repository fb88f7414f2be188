//! Gram-Schmidt data of a lattice basis, computed once and reused.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Orthogonalization of the columns `b_1, ..., b_n` of a basis matrix.
#[derive(Clone, Debug)]
pub struct GramSchmidtData {
    basis: DMatrix<f64>,
    ortho: DMatrix<f64>,
    norms: Vec<f64>,
    directions: DMatrix<f64>,
}

impl GramSchmidtData {
    /// Orthogonalizes from left to right with modified Gram-Schmidt and one
    /// reorthogonalization pass.
    pub fn new(basis: DMatrix<f64>) -> Result<Self> {
        let (d, n) = basis.shape();
        if n == 0 || d < n {
            return Err(Error::param(
                "basis",
                format!("need n >= 1 linearly independent columns, got a {d}x{n} matrix"),
            ));
        }
        if basis.iter().any(|x| !x.is_finite()) {
            return Err(Error::param("basis", "entries must be finite"));
        }
        let mut ortho = basis.clone();
        let mut norms = Vec::with_capacity(n);
        let mut directions = DMatrix::zeros(d, n);
        for i in 0..n {
            let scale = basis.column(i).norm();
            let mut v: DVector<f64> = basis.column(i).into_owned();
            for _pass in 0..2 {
                for j in 0..i {
                    let dir = directions.column(j);
                    let coef = dir.dot(&v);
                    v -= dir * coef;
                }
            }
            let nv = v.norm();
            if !(nv > 1e-12 * scale.max(f64::MIN_POSITIVE)) {
                return Err(Error::param(
                    "basis",
                    format!("column {i} is (numerically) dependent on earlier columns"),
                ));
            }
            directions.set_column(i, &(&v / nv));
            ortho.set_column(i, &v);
            norms.push(nv);
        }
        Ok(GramSchmidtData {
            basis,
            ortho,
            norms,
            directions,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::param("basis", "ragged rows"));
        }
        Self::new(DMatrix::from_fn(n, m, |i, j| rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.norms.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// The orthogonalized vectors as columns.
    pub fn orthogonalized(&self) -> &DMatrix<f64> {
        &self.ortho
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    /// Unit vectors along the orthogonalized columns.
    pub fn directions(&self) -> &DMatrix<f64> {
        &self.directions
    }

    /// Largest orthogonalized norm.
    pub fn max_norm(&self) -> f64 {
        self.norms.iter().copied().fold(0.0, f64::max)
    }
}

/// Upper bound `|B~| sqrt(ln(2n(1 + 1/eps)) / pi)` on the smoothing parameter.
pub fn smoothing_bound(gs: &GramSchmidtData, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param("eps", format!("must lie in (0, 1), got {eps}")));
    }
    let n = gs.dim() as f64;
    Ok(gs.max_norm() * ((2.0 * n * (1.0 + 1.0 / eps)).ln() / std::f64::consts::PI).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_and_span_preserving() {
        let gs = GramSchmidtData::from_rows(&[vec![1.0, 0.5, 2.0], vec![0.0, 1.0, -1.0], vec![0.3, 0.0, 1.5]]).unwrap();
        let o = gs.orthogonalized();
        for i in 0..3 {
            for j in 0..i {
                let d = o.column(i).dot(&o.column(j));
                assert!(d.abs() <= 1e-12 * gs.norms()[i] * gs.norms()[j]);
            }
        }
        // Each orthogonalized vector is b_i minus a combination of earlier b_j,
        // so the Gram-Schmidt norms multiply to |det B|.
        let det = gs.basis().determinant().abs();
        let prod: f64 = gs.norms().iter().product();
        assert!((det - prod).abs() < 1e-12);
    }

    #[test]
    fn skewed_basis_norms() {
        let gs = GramSchmidtData::from_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap();
        assert!((gs.norms()[0] - 1.0).abs() < 1e-15);
        assert!((gs.norms()[1] - 1.0).abs() < 1e-15);
        assert!(GramSchmidtData::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).is_err());
    }

    #[test]
    fn smoothing_examples() {
        let one = GramSchmidtData::from_rows(&[vec![1.0]]).unwrap();
        let b = smoothing_bound(&one, 0.5).unwrap();
        assert!((b - (6f64.ln() / std::f64::consts::PI).sqrt()).abs() < 1e-15);
        assert!((b - 0.755_205).abs() < 1e-6);

        let big = GramSchmidtData::new(DMatrix::identity(64, 64)).unwrap();
        let b = smoothing_bound(&big, 2f64.powi(-10)).unwrap();
        let expect = ((2.0 * 64.0 * 1025.0f64).ln() / std::f64::consts::PI).sqrt();
        assert!((b - expect).abs() < 1e-14);
        assert!((b - 1.936_78).abs() < 1e-5);

        let scaled = GramSchmidtData::new(DMatrix::identity(64, 64) * 3.5).unwrap();
        let s = smoothing_bound(&scaled, 2f64.powi(-10)).unwrap();
        assert!((s - 3.5 * b).abs() < 1e-12);
        assert!(smoothing_bound(&one, 1.0).is_err());
    }
}
