//! Short bases of the integer vectors orthogonal to a 0/1 hint vector.

use nalgebra::DMatrix;
use num_bigint::BigInt;

use crate::arith::IntMatrix;
use crate::error::{Error, Result};

/// Unimodular `U` whose columns after the first are orthogonal to `z` and
/// have largest singular value at most `xi`.
#[derive(Clone, Debug, PartialEq)]
pub struct QualityCert {
    pub z: Vec<i64>,
    pub u: IntMatrix,
    /// `U` without its leftmost column.
    pub u_prime: IntMatrix,
    pub xi: f64,
}

/// Largest singular value.
pub fn spectral_norm(m: &IntMatrix) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    let d = DMatrix::from_row_slice(m.rows(), m.cols(), &m.to_f64());
    d.singular_values().iter().copied().fold(0.0, f64::max)
}

/// For `z` with its ones in front, `U` is upper bidiagonal with unit diagonal
/// and superdiagonal `(-1, ..., -1, 0, ..., 0)` carrying `k - 1` minus ones,
/// `k` being the number of ones. Other `z` are handled by permuting the rows
/// of that matrix, which preserves orthogonality to `z` (after the same
/// permutation) and all singular values.
pub fn build_quality_u(z: &[i64]) -> Result<QualityCert> {
    let m = z.len();
    if m == 0 {
        return Err(Error::param("z", "hint vector must be nonempty"));
    }
    if z.iter().any(|&x| x != 0 && x != 1) {
        return Err(Error::HintSet(format!("{z:?} is not a 0/1 vector")));
    }
    let mut perm: Vec<usize> = (0..m).filter(|&i| z[i] == 1).collect();
    let k = perm.len();
    perm.extend((0..m).filter(|&i| z[i] == 0));
    let mut u = IntMatrix::zeros(m, m);
    for i in 0..m {
        u.set(perm[i], i, BigInt::from(1));
        if i + 1 < m && i + 1 < k {
            u.set(perm[i], i + 1, BigInt::from(-1));
        }
    }
    let mut u_prime = IntMatrix::zeros(m, m - 1);
    for i in 0..m {
        for j in 1..m {
            u_prime.set(i, j - 1, u.get(i, j).clone());
        }
    }
    Ok(QualityCert {
        z: z.to_vec(),
        u,
        u_prime,
        xi: 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(cert: &QualityCert) {
        let det = cert.u.det().unwrap();
        assert!(det == BigInt::from(1) || det == BigInt::from(-1));
        let zb: Vec<BigInt> = cert.z.iter().map(|&x| BigInt::from(x)).collect();
        let ortho = cert.u_prime.transpose().mul_vec(&zb).unwrap();
        assert!(ortho.iter().all(|x| *x == BigInt::from(0)));
        assert!(spectral_norm(&cert.u_prime) <= 2.0 + 1e-9);
    }

    #[test]
    fn zero_hint_gives_identity() {
        let c = build_quality_u(&[0, 0, 0, 0]).unwrap();
        assert_eq!(c.u, IntMatrix::identity(4));
        assert!((spectral_norm(&c.u_prime) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sorted_example() {
        let c = build_quality_u(&[1, 1, 0]).unwrap();
        let want = IntMatrix::from_rows(&[vec![1, -1, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(c.u, want);
        check(&c);
    }

    #[test]
    fn all_ones_m8() {
        let c = build_quality_u(&[1; 8]).unwrap();
        check(&c);
        // The path-graph difference matrix has norm 2 cos(pi / (2 * 8)) < 2.
        let s = spectral_norm(&c.u_prime);
        assert!((s - 2.0 * (std::f64::consts::PI / 16.0).cos()).abs() < 1e-9);
    }

    #[test]
    fn rejects_non_binary() {
        assert!(matches!(build_quality_u(&[1, 2]), Err(Error::HintSet(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn random_hints(z in (2usize..=64).prop_flat_map(|m| proptest::collection::vec(0i64..=1, m))) {
            check(&build_quality_u(&z).unwrap());
        }
    }
}
