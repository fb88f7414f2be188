//! Dense integer matrices with arbitrary-precision entries.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::zq::reduce;
use crate::error::{Error, Result};

/// Row-major `rows x cols` integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::param("matrix", "dimensions must be positive"));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension {
                what: "matrix entries",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Convenience constructor from nested rows of machine integers.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::param("matrix", "ragged rows"));
        }
        IntMatrix::new(r, c, rows.iter().flatten().map(|&x| BigInt::from(x)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension {
                what: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::Dimension {
                what: "matrix-vector product",
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Entrywise reduction into `[0, q)`.
    pub fn mod_q(&self, q: &BigUint) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| BigInt::from(reduce(x, q))).collect(),
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Dimension {
                what: "determinant of non-square matrix",
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v.div_floor(&prev);
                }
                a[i * n + k] = BigInt::zero();
            }
            prev = a[k * n + k].clone();
        }
        Ok(sign * &a[n * n - 1])
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().is_ok_and(|d| d.abs().is_one())
    }

    /// Entries as `f64`, row-major; large entries lose precision.
    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub(crate) fn data_mut(&mut self) -> &mut [BigInt] {
        &mut self.data
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Replaces rows `(i, j)` by `(x r_i + y r_j, z r_i + w r_j)`.
    pub(crate) fn combine_rows(&mut self, i: usize, j: usize, t: [&BigInt; 4]) {
        let c = self.cols;
        for k in 0..c {
            let ri = self.data[i * c + k].clone();
            let rj = self.data[j * c + k].clone();
            self.data[i * c + k] = t[0] * &ri + t[1] * &rj;
            self.data[j * c + k] = t[2] * &ri + t[3] * &rj;
        }
    }

    /// Replaces columns `(i, j)` by `(x c_i + z c_j, y c_i + w c_j)`, i.e. right
    /// multiplication by `[[x, y], [z, w]]` on those columns.
    pub(crate) fn combine_cols(&mut self, i: usize, j: usize, t: [&BigInt; 4]) {
        let c = self.cols;
        for k in 0..self.rows {
            let ci = self.data[k * c + i].clone();
            let cj = self.data[k * c + j].clone();
            self.data[k * c + i] = t[0] * &ci + t[2] * &cj;
            self.data[k * c + j] = t[1] * &ci + t[3] * &cj;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn determinant_small() {
        assert_eq!(m(&[vec![2, 1], vec![0, 1]]).det().unwrap(), BigInt::from(2));
        assert_eq!(
            m(&[vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 9]]).det().unwrap(),
            BigInt::from(-3)
        );
        assert_eq!(m(&[vec![1, 2], vec![2, 4]]).det().unwrap(), BigInt::zero());
        assert!(m(&[vec![1, 2, 3]]).det().is_err());
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        // 4x4 integer matrix; reference by Laplace expansion along the first row.
        let rows = vec![
            vec![3, -2, 5, 1],
            vec![7, 0, -4, 2],
            vec![-1, 6, 2, -3],
            vec![4, 4, -5, 8],
        ];
        fn laplace(a: &[Vec<i64>]) -> i64 {
            if a.len() == 1 {
                return a[0][0];
            }
            (0..a.len())
                .map(|j| {
                    let minor: Vec<Vec<i64>> = a[1..]
                        .iter()
                        .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                        .collect();
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    s * a[0][j] * laplace(&minor)
                })
                .sum()
        }
        assert_eq!(m(&rows).det().unwrap(), BigInt::from(laplace(&rows)));
    }

    #[test]
    fn product_and_transpose() {
        let a = m(&[vec![1, 2, 3], vec![4, 5, 6]]);
        let b = a.transpose();
        assert_eq!(a.mul(&b).unwrap(), m(&[vec![14, 32], vec![32, 77]]));
        assert!(a.mul(&a).is_err());
        assert_eq!(
            a.mul_vec(&[BigInt::from(1), BigInt::from(0), BigInt::from(-1)])
                .unwrap(),
            vec![BigInt::from(-2), BigInt::from(-2)]
        );
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(IntMatrix::new(0, 2, vec![]).is_err());
        assert!(IntMatrix::new(2, 2, vec![BigInt::zero(); 3]).is_err());
    }
}
