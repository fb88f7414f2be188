//! Greedy search for `n` vectors that form a matrix invertible mod `q`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{complete_with_reducer, invert_mod_q, reduce, IntMatrix};
use crate::error::{Error, Result};
use crate::{abort, Outcome};

/// Indices of the chosen vectors and the inverse of the matrix whose columns they are.
#[derive(Clone, Debug, PartialEq)]
pub struct InvertibleSubset {
    pub indices: Vec<usize>,
    /// `A_0` with the chosen vectors as columns, entries in `[0, q)`.
    pub matrix: IntMatrix,
    pub inverse: IntMatrix,
}

/// Scans `vectors` (residues mod `q`, each of length `n`) and keeps a vector
/// when the gcd of the last `n - k` entries of `U a` is coprime with `q`,
/// where `k` vectors are already kept and `U` is a transform that puts the
/// kept vectors in upper-triangular form whose diagonal entries are units mod `q`.
/// Aborts if the sequence runs out before `n` vectors are kept.
pub fn find_invertible_subsequence(
    vectors: &[Vec<BigUint>],
    n: usize,
    q: &BigUint,
) -> Result<Outcome<InvertibleSubset>> {
    if n == 0 {
        return Err(Error::param("n", "dimension must be at least 1"));
    }
    let qi = BigInt::from(q.clone());
    let mut u = IntMatrix::identity(n);
    let mut indices = Vec::with_capacity(n);
    for (idx, a) in vectors.iter().enumerate() {
        if a.len() != n {
            return Err(Error::Dimension {
                what: "sample vector",
                expected: n,
                found: a.len(),
            });
        }
        let k = indices.len();
        let ai: Vec<BigInt> = a.iter().map(|x| BigInt::from(x.clone())).collect();
        let ua: Vec<BigInt> = u.mul_vec(&ai)?.iter().map(|x| BigInt::from(reduce(x, q))).collect();
        let tail = &ua[k..];
        let g = tail.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() || !g.gcd(&qi).is_one() {
            continue;
        }
        let completion = complete_with_reducer(tail, q)?;
        let mut v = IntMatrix::identity(n);
        for i in 0..n - k {
            for j in 0..n - k {
                v.set(k + i, k + j, completion.reducer.get(i, j).clone());
            }
        }
        u = v.mul(&u)?.mod_q(q);
        indices.push(idx);
        if indices.len() == n {
            let mut a0 = IntMatrix::zeros(n, n);
            for (col, &i) in indices.iter().enumerate() {
                for (row, x) in vectors[i].iter().enumerate() {
                    a0.set(row, col, BigInt::from(x.clone()));
                }
            }
            let inverse = invert_mod_q(&a0, q)?;
            return Ok(Outcome::Done(InvertibleSubset {
                indices,
                matrix: a0,
                inverse,
            }));
        }
    }
    Ok(abort(
        "invertible subsequence",
        format!(
            "only {} of {n} independent vectors among {}",
            indices.len(),
            vectors.len()
        ),
    ))
}

/// `t1 n + ceil(t2 max(0, ln ln q))`, the number of vectors the search is given.
pub fn subsequence_budget(n: usize, q: &BigUint, t1: f64, t2: f64) -> usize {
    use num_traits::ToPrimitive;
    let lnq = q
        .to_f64()
        .map_or_else(|| q.bits() as f64 * std::f64::consts::LN_2, f64::ln);
    let lnlnq = if lnq > 1.0 { lnq.ln() } else { 0.0 };
    (t1 * n as f64).ceil() as usize + (t2 * lnlnq.max(0.0)).ceil() as usize
}

/// Failure bound `e^{-t1 n / 16} + e^{-t2 / 4}` for the search.
pub fn subsequence_abort_bound(n: usize, t1: f64, t2: f64) -> f64 {
    (-t1 * n as f64 / 16.0).exp() + (-t2 / 4.0).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vecs(v: &[&[u32]]) -> Vec<Vec<BigUint>> {
        v.iter()
            .map(|r| r.iter().map(|&x| BigUint::from(x)).collect())
            .collect()
    }

    #[test]
    fn unit_vectors_first() {
        let q = BigUint::from(7u8);
        let out = find_invertible_subsequence(&vecs(&[&[1, 0], &[0, 1], &[3, 3]]), 2, &q).unwrap();
        let s = out.done().unwrap();
        assert_eq!(s.indices, vec![0, 1]);
        assert_eq!(s.inverse, IntMatrix::identity(2));
    }

    #[test]
    fn zero_vectors_abort() {
        let q = BigUint::from(32u8);
        let out = find_invertible_subsequence(&vecs(&[&[0u32, 0][..]; 10]), 2, &q).unwrap();
        assert!(out.is_aborted());
    }

    #[test]
    fn skips_dependent_vectors() {
        let q = BigUint::from(12u8);
        // (2, 4) has gcd 2; (1, 2) then (2, 4) again is dependent; (0, 5) completes.
        let out = find_invertible_subsequence(&vecs(&[&[2, 4], &[1, 2], &[2, 4], &[0, 5]]), 2, &q)
            .unwrap()
            .done()
            .unwrap();
        assert_eq!(out.indices, vec![1, 3]);
        let prod = out.matrix.mul(&out.inverse).unwrap().mod_q(&q);
        assert_eq!(prod, IntMatrix::identity(2));
    }

    #[test]
    fn budget_values() {
        let q = BigUint::from(32u8);
        // 40 + ceil(ln ln 32) = 40 + ceil(1.2429)
        assert_eq!(subsequence_budget(10, &q, 4.0, 1.0), 42);
        assert_eq!(subsequence_budget(2, &BigUint::from(2u8), 16.0, 4.0), 32);
        let b = subsequence_abort_bound(10, 4.0, 1.0);
        assert!((b - ((-2.5f64).exp() + (-0.25f64).exp())).abs() < 1e-15);
    }
}
