//! Extended Euclid and completion of a vector to a matrix invertible mod `q`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Returns `(g, x, y)` with `g = gcd(a, b) > 0` and `a x + b y = g`.
pub fn extended_gcd(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt, BigInt)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroGcd);
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_negative() {
        Ok((-r0, -s0, -t0))
    } else {
        Ok((r0, s0, t0))
    }
}

/// Result of completing a vector `a` to a matrix whose first column is `a`.
#[derive(Clone, Debug)]
pub struct Completion {
    /// The completed matrix; first column equals `a`, `det = ±gcd(a)`.
    pub u: IntMatrix,
    /// Unimodular `R` with `R a = (g, 0, ..., 0)`.
    pub reducer: IntMatrix,
    /// `g = gcd(a)`.
    pub gcd: BigInt,
}

/// A matrix invertible mod `q` whose leftmost column is `a`.
pub fn unimodular_completion(a: &[BigInt], q: &BigUint) -> Result<IntMatrix> {
    complete_with_reducer(a, q).map(|c| c.u)
}

/// As [`unimodular_completion`], also returning the reducing transform.
///
/// Adjacent entries are merged from the bottom up with 2x2 determinant-one
/// transforms built from Bezout coefficients; `U = R^{-1} diag(g, 1, ..., 1)`.
pub fn complete_with_reducer(a: &[BigInt], q: &BigUint) -> Result<Completion> {
    let n = a.len();
    if n == 0 {
        return Err(Error::param("a", "vector must be nonempty"));
    }
    let mut cur = a.to_vec();
    let mut reducer = IntMatrix::identity(n);
    let mut reducer_inv = IntMatrix::identity(n);
    for i in (1..n).rev() {
        if cur[i].is_zero() {
            continue;
        }
        let (g, x, y) = extended_gcd(&cur[i - 1], &cur[i])?;
        let lo = -(&cur[i] / &g);
        let hi = &cur[i - 1] / &g;
        reducer.combine_rows(i - 1, i, [&x, &y, &lo, &hi]);
        // Inverse of [[x, y], [lo, hi]] (determinant one).
        let (nx, ny) = (-&y, -&lo);
        reducer_inv.combine_cols(i - 1, i, [&hi, &nx, &ny, &x]);
        cur[i - 1] = g;
        cur[i] = BigInt::zero();
    }
    let mut g = cur[0].clone();
    if g.is_negative() {
        g = -g;
        let minus = BigInt::from(-1);
        let one = BigInt::one();
        let zero = BigInt::zero();
        if n > 1 {
            reducer.combine_rows(0, 1, [&minus, &zero, &zero, &one]);
            reducer_inv.combine_cols(0, 1, [&minus, &zero, &zero, &one]);
        } else {
            reducer = IntMatrix::identity(1);
            reducer.set(0, 0, minus.clone());
            reducer_inv = reducer.clone();
        }
    }
    let qi = BigInt::from(q.clone());
    if !g.gcd(&qi).is_one() {
        return Err(Error::NotCoprime { gcd: g, modulus: qi });
    }
    let mut u = reducer_inv;
    for k in 0..n {
        let v = u.get(k, 0) * &g;
        u.set(k, 0, v);
    }
    Ok(Completion { u, reducer, gcd: g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn bezout_examples() {
        assert_eq!(extended_gcd(&bi(12), &bi(8)).unwrap(), (bi(4), bi(1), bi(-1)));
        assert_eq!(extended_gcd(&bi(1), &bi(0)).unwrap(), (bi(1), bi(1), bi(0)));
        assert_eq!(extended_gcd(&bi(5), &bi(7)).unwrap(), (bi(1), bi(3), bi(-2)));
        assert_eq!(extended_gcd(&bi(0), &bi(0)), Err(Error::ZeroGcd));
        let (g, x, y) = extended_gcd(&bi(-12), &bi(8)).unwrap();
        assert_eq!(g, bi(4));
        assert_eq!(bi(-12) * x + bi(8) * y, g);
    }

    #[test]
    fn completion_examples() {
        let q = BigUint::from(7u8);
        let u = unimodular_completion(&[bi(1), bi(0)], &q).unwrap();
        assert_eq!(u, IntMatrix::identity(2));

        let q = BigUint::from(5u8);
        let u = unimodular_completion(&[bi(2), bi(3)], &q).unwrap();
        assert_eq!(u.column(0), vec![bi(2), bi(3)]);
        let d = u.det().unwrap().mod_floor(&bi(5));
        assert!(!d.is_zero());

        let q = BigUint::from(2u8);
        assert!(matches!(
            unimodular_completion(&[bi(2), bi(4)], &q),
            Err(Error::NotCoprime { .. })
        ));
        assert!(unimodular_completion(&[bi(0), bi(0)], &q).is_err());
    }

    #[test]
    fn completion_exhaustive_small_moduli() {
        for q in 2u32..=16 {
            let qb = BigUint::from(q);
            for a0 in 0..q {
                for a1 in 0..q {
                    let a = [bi(a0 as i64), bi(a1 as i64)];
                    let g = (a0 as u64).gcd(&(a1 as u64));
                    let coprime = g != 0 && g.gcd(&(q as u64)) == 1;
                    match complete_with_reducer(&a, &qb) {
                        Ok(c) => {
                            assert!(coprime, "a=({a0},{a1}) q={q}");
                            assert_eq!(c.u.column(0), a.to_vec());
                            let d = c.u.det().unwrap();
                            assert!(d.gcd(&bi(q as i64)).is_one());
                            assert!(c.reducer.is_unimodular());
                            let ra = c.reducer.mul_vec(&a).unwrap();
                            assert_eq!(ra, vec![c.gcd.clone(), bi(0)]);
                        }
                        Err(_) => assert!(!coprime, "a=({a0},{a1}) q={q}"),
                    }
                }
            }
        }
    }

    #[test]
    fn completion_longer_vectors() {
        let q = BigUint::from(30u8);
        for a in [vec![0, 0, 7], vec![6, 10, 15, 0], vec![-3, 5, 0, 11, 4], vec![0, -1]] {
            let a: Vec<BigInt> = a.into_iter().map(bi).collect();
            let c = complete_with_reducer(&a, &q).unwrap();
            assert_eq!(c.u.column(0), a);
            assert!(c.reducer.is_unimodular());
            assert_eq!(c.u.det().unwrap().abs(), c.gcd);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]
        #[test]
        fn bezout_random_256_bit(a in proptest::collection::vec(any::<u64>(), 4), b in proptest::collection::vec(any::<u64>(), 4), neg in any::<bool>()) {
            let a = BigInt::from(BigUint::new(a.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect()));
            let b = BigInt::from(BigUint::new(b.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect()));
            let a = if neg { -a } else { a };
            prop_assume!(!(a.is_zero() && b.is_zero()));
            let (g, x, y) = extended_gcd(&a, &b).unwrap();
            prop_assert!(g.is_positive());
            prop_assert_eq!(&a * &x + &b * &y, g.clone());
            prop_assert_eq!(g, a.gcd(&b));
        }
    }
}
