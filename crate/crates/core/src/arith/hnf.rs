//! Hermite normal form by unimodular row operations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::gcd::extended_gcd;
use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Returns `(H, U)` with `H = U M`, `U` unimodular and `H` in Hermite normal form:
/// echelon shape, positive pivots, and entries above each pivot reduced into
/// `[0, pivot)`. The nonzero rows of `H` are a basis of the row lattice of `M`.
pub fn hermite_normal_form(m: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    if (0..m.rows()).all(|i| m.row(i).iter().all(Zero::is_zero)) {
        return Err(Error::param("M", "matrix must be nonzero"));
    }
    let rows = m.rows();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pivot_row = 0;
    for col in 0..m.cols() {
        if pivot_row == rows {
            break;
        }
        for r in pivot_row + 1..rows {
            if h.get(r, col).is_zero() {
                continue;
            }
            let (x, y) = (h.get(pivot_row, col).clone(), h.get(r, col).clone());
            let (g, s, t) = extended_gcd(&x, &y)?;
            let lo = -(&y / &g);
            let hi = &x / &g;
            h.combine_rows(pivot_row, r, [&s, &t, &lo, &hi]);
            u.combine_rows(pivot_row, r, [&s, &t, &lo, &hi]);
        }
        let p = h.get(pivot_row, col).clone();
        if p.is_zero() {
            continue;
        }
        if p.is_negative() {
            negate_row(&mut h, pivot_row);
            negate_row(&mut u, pivot_row);
        }
        let p = h.get(pivot_row, col).clone();
        for r in 0..pivot_row {
            let f = h.get(r, col).div_floor(&p);
            if f.is_zero() {
                continue;
            }
            sub_row_multiple(&mut h, r, pivot_row, &f);
            sub_row_multiple(&mut u, r, pivot_row, &f);
        }
        pivot_row += 1;
    }
    Ok((h, u))
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    let c = m.cols();
    for x in &mut m.data_mut()[r * c..(r + 1) * c] {
        *x = -std::mem::take(x);
    }
}

fn sub_row_multiple(m: &mut IntMatrix, target: usize, src: usize, f: &BigInt) {
    for j in 0..m.cols() {
        let v = m.get(target, j) - f * m.get(src, j);
        m.set(target, j, v);
    }
}

/// Number of leading nonzero rows of an echelon matrix.
pub fn rank_of_echelon(h: &IntMatrix) -> usize {
    (0..h.rows())
        .take_while(|&i| h.row(i).iter().any(|x| !x.is_zero()))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn check_hnf(h: &IntMatrix) {
        let mut last_pivot: Option<usize> = None;
        for i in 0..h.rows() {
            let Some(p) = (0..h.cols()).find(|&j| !h.get(i, j).is_zero()) else {
                for k in i..h.rows() {
                    assert!(h.row(k).iter().all(Zero::is_zero));
                }
                return;
            };
            assert!(last_pivot.is_none_or(|lp| p > lp));
            let piv = h.get(i, p);
            assert!(piv.is_positive());
            for k in 0..i {
                assert!(!h.get(k, p).is_negative() && h.get(k, p) < piv);
            }
            for k in i + 1..h.rows() {
                assert!(h.get(k, p).is_zero());
            }
            last_pivot = Some(p);
        }
    }

    #[test]
    fn examples() {
        let (h, u) = hermite_normal_form(&IntMatrix::identity(3)).unwrap();
        assert_eq!(h, IntMatrix::identity(3));
        assert_eq!(u, IntMatrix::identity(3));

        let a = m(&[vec![2, 1], vec![0, 1]]);
        let (h, u) = hermite_normal_form(&a).unwrap();
        assert_eq!(h, m(&[vec![2, 0], vec![0, 1]]));
        assert_eq!(u, m(&[vec![1, -1], vec![0, 1]]));
        assert_eq!(u.mul(&a).unwrap(), h);

        let a = m(&[vec![4], vec![6]]);
        let (h, u) = hermite_normal_form(&a).unwrap();
        assert_eq!(h, m(&[vec![2], vec![0]]));
        assert!(u.is_unimodular());
        assert_eq!(u.mul(&a).unwrap(), h);

        assert!(hermite_normal_form(&IntMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn negative_single_row() {
        let a = m(&[vec![-3, 6]]);
        let (h, u) = hermite_normal_form(&a).unwrap();
        assert_eq!(h, m(&[vec![3, -6]]));
        assert_eq!(u.det().unwrap().abs(), BigInt::one());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn defining_equations(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-9i64..10, 16)) {
            let data: Vec<BigInt> = (0..rows * cols).map(|i| BigInt::from(seed[i % 16] * (1 + (i as i64 % 3)))).collect();
            let a = IntMatrix::new(rows, cols, data).unwrap();
            prop_assume!((0..rows).any(|i| a.row(i).iter().any(|x| !x.is_zero())));
            let (h, u) = hermite_normal_form(&a).unwrap();
            prop_assert!(u.is_unimodular());
            prop_assert_eq!(u.mul(&a).unwrap(), h.clone());
            check_hnf(&h);
        }
    }
}
