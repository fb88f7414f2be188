//! Matrix inversion over `Z_q` for arbitrary (not necessarily prime) `q`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::gcd::extended_gcd;
use super::matrix::IntMatrix;
use super::zq::{inverse_mod, reduce};
use crate::error::{Error, Result};

/// Inverse of `m` modulo `q`, or [`Error::Singular`] when none exists.
///
/// Gauss-Jordan elimination on `[M | I]`. Each column first looks for a unit
/// pivot; failing that, rows are merged with Bezout transforms until the pivot
/// holds the gcd of the column, which is a unit exactly when the column's
/// entries are jointly coprime with `q`.
pub fn invert_mod_q(m: &IntMatrix, q: &BigUint) -> Result<IntMatrix> {
    let n = m.rows();
    if m.cols() != n {
        return Err(Error::Dimension {
            what: "inverse of non-square matrix",
            expected: n,
            found: m.cols(),
        });
    }
    let qi = BigInt::from(q.clone());
    let modq = |x: &BigInt| BigInt::from(reduce(x, q));
    let mut a = m.mod_q(q);
    let mut inv = IntMatrix::identity(n);

    for c in 0..n {
        let unit_row = (c..n).find(|&r| a.get(r, c).gcd(&qi).is_one());
        match unit_row {
            Some(r) => {
                a.swap_rows(c, r);
                inv.swap_rows(c, r);
            }
            None => {
                for r in c + 1..n {
                    if a.get(r, c).is_zero() {
                        continue;
                    }
                    let (x, y) = (a.get(c, c).clone(), a.get(r, c).clone());
                    let (g, s, t) = extended_gcd(&x, &y)?;
                    let lo = -(&y / &g);
                    let hi = &x / &g;
                    a.combine_rows(c, r, [&s, &t, &lo, &hi]);
                    inv.combine_rows(c, r, [&s, &t, &lo, &hi]);
                }
                if !a.get(c, c).gcd(&qi).is_one() {
                    return Err(Error::Singular { modulus: qi, column: c });
                }
            }
        }
        let pinv = BigInt::from(inverse_mod(a.get(c, c), q).expect("pivot was checked to be a unit"));
        for j in 0..n {
            let v = modq(&(a.get(c, j) * &pinv));
            a.set(c, j, v);
            let w = modq(&(inv.get(c, j) * &pinv));
            inv.set(c, j, w);
        }
        for r in 0..n {
            if r == c || a.get(r, c).is_zero() {
                continue;
            }
            let f = a.get(r, c).clone();
            for j in 0..n {
                let v = modq(&(a.get(r, j) - &f * a.get(c, j)));
                a.set(r, j, v);
                let w = modq(&(inv.get(r, j) - &f * inv.get(c, j)));
                inv.set(r, j, w);
            }
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn examples() {
        let q = BigUint::from(4u8);
        assert_eq!(
            invert_mod_q(&IntMatrix::identity(3), &q).unwrap(),
            IntMatrix::identity(3)
        );
        assert_eq!(
            invert_mod_q(&m(&[vec![1, 1], vec![0, 1]]), &q).unwrap(),
            m(&[vec![1, 3], vec![0, 1]])
        );
        assert!(matches!(
            invert_mod_q(&m(&[vec![2, 0], vec![0, 1]]), &q),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn needs_row_merge() {
        // No entry of the first column is a unit mod 6, yet the matrix is invertible.
        let q = BigUint::from(6u8);
        let a = m(&[vec![2, 1], vec![3, 1]]);
        let inv = invert_mod_q(&a, &q).unwrap();
        assert_eq!(a.mul(&inv).unwrap().mod_q(&q), IntMatrix::identity(2));
    }

    #[test]
    fn agrees_with_determinant_test() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for q in [2u64, 4, 6, 9, 12, 16, 30, 97] {
            let qb = BigUint::from(q);
            for _ in 0..200 {
                let n = rng.random_range(1..=4);
                let data: Vec<BigInt> = (0..n * n).map(|_| BigInt::from(rng.random_range(0..q))).collect();
                let a = IntMatrix::new(n, n, data).unwrap();
                let det_unit = a.det().unwrap().gcd(&BigInt::from(q)).is_one();
                match invert_mod_q(&a, &qb) {
                    Ok(inv) => {
                        assert!(det_unit);
                        assert_eq!(a.mul(&inv).unwrap().mod_q(&qb), IntMatrix::identity(n));
                        assert_eq!(inv.mul(&a).unwrap().mod_q(&qb), IntMatrix::identity(n));
                    }
                    Err(_) => assert!(!det_unit, "{a:?} mod {q}"),
                }
            }
        }
    }
}
