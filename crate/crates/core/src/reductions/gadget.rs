//! The switching matrix `G`, a basis of `L = (1/q') G^T Z^{n'} + Z^n`, and
//! uniform solutions of `G^T a' = v mod Z^n`.

use nalgebra::DMatrix;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rand::Rng;

use crate::arith::{hermite_normal_form, reduce, uniform_below, IntMatrix};
use crate::error::{Error, Result};
use crate::gaussian::GramSchmidtData;

#[derive(Clone, Debug, PartialEq)]
enum Shape {
    /// `G = I_{n'} (x) (1, q, ..., q^{k-1})`, `q' = q^k`.
    Gadget { k: usize, q: BigUint },
    /// Any `G`; preimages go through the Hermite normal form.
    General,
}

/// `G` (`n' x n`), the modulus `q'`, and a basis of `L` stored as the integer
/// matrix `q' B` whose columns are the basis vectors.
#[derive(Clone, Debug)]
pub struct GadgetPair {
    pub g: IntMatrix,
    pub q_prime: BigUint,
    pub basis_scaled: IntMatrix,
    /// Lower-triangular basis of `q' L` from the Hermite normal form.
    hnf_basis: IntMatrix,
    gs: GramSchmidtData,
    shape: Shape,
}

impl GadgetPair {
    /// Pair for an arbitrary `G`; the basis is the Hermite normal form of the
    /// generators of `q' L`.
    pub fn general(g: IntMatrix, q_prime: BigUint) -> Result<Self> {
        if q_prime.is_zero() {
            return Err(Error::param("q'", "modulus must be positive"));
        }
        let basis = lattice_hnf(&g, &q_prime)?;
        Self::assemble(g, q_prime, basis.clone(), basis, Shape::General)
    }

    fn assemble(
        g: IntMatrix,
        q_prime: BigUint,
        basis_scaled: IntMatrix,
        hnf_basis: IntMatrix,
        shape: Shape,
    ) -> Result<Self> {
        let qf = q_prime.to_f64().unwrap_or(f64::INFINITY);
        let n = basis_scaled.rows();
        let b = DMatrix::from_row_slice(n, n, &basis_scaled.to_f64()) / qf;
        let gs = GramSchmidtData::new(b)?;
        Ok(GadgetPair {
            g,
            q_prime,
            basis_scaled,
            hnf_basis,
            gs,
            shape,
        })
    }

    pub fn n(&self) -> usize {
        self.g.cols()
    }

    pub fn n_prime(&self) -> usize {
        self.g.rows()
    }

    /// Gram-Schmidt data of the basis `B`.
    pub fn gram_schmidt(&self) -> &GramSchmidtData {
        &self.gs
    }

    /// `|B~|`, computed from the basis.
    pub fn gs_norm(&self) -> f64 {
        self.gs.max_norm()
    }

    /// `G s` for an integer secret `s`.
    pub fn apply(&self, s: &[BigInt]) -> Result<Vec<BigInt>> {
        self.g.mul_vec(s)
    }

    /// Whether the integer vector `w` lies in `q' L`, i.e. whether
    /// `G^T x = w mod q'` has a solution.
    pub fn contains_scaled(&self, w: &[BigInt]) -> bool {
        w.len() == self.n() && solve_triangular(&self.hnf_basis, w).is_some()
    }
}

/// The tradeoff pair: dimension `n` to `n / k`, modulus `q` to `q^k`.
pub fn gadget_basis(n: usize, k: usize, q: &BigUint) -> Result<GadgetPair> {
    if k == 0 || n == 0 || !n.is_multiple_of(k) {
        return Err(Error::param("k", format!("k = {k} must divide n = {n}")));
    }
    if *q < BigUint::from(2u8) {
        return Err(Error::param("q", "modulus must be at least 2"));
    }
    let np = n / k;
    let q_prime: BigUint = Pow::pow(q, k);
    let mut g = IntMatrix::zeros(np, n);
    for i in 0..np {
        for j in 0..k {
            g.set(i, i * k + j, BigInt::from(Pow::pow(q, j)));
        }
    }
    // q' B has block entries q^{k - (c - r + 1)} on and above the diagonal.
    let mut bs = IntMatrix::zeros(n, n);
    for blk in 0..np {
        for r in 0..k {
            for c in r..k {
                bs.set(blk * k + r, blk * k + c, BigInt::from(Pow::pow(q, k - (c - r + 1))));
            }
        }
    }
    let hnf = lattice_hnf(&g, &q_prime)?;
    GadgetPair::assemble(g, q_prime, bs, hnf, Shape::Gadget { k, q: q.clone() })
}

/// Columns: the nonzero rows of the Hermite normal form of `[G; q' I]`.
fn lattice_hnf(g: &IntMatrix, q_prime: &BigUint) -> Result<IntMatrix> {
    let (np, n) = (g.rows(), g.cols());
    let qp = BigInt::from(q_prime.clone());
    let mut gens = IntMatrix::zeros(np + n, n);
    for i in 0..np {
        for j in 0..n {
            gens.set(i, j, g.get(i, j).clone());
        }
    }
    for j in 0..n {
        gens.set(np + j, j, qp.clone());
    }
    let (h, _) = hermite_normal_form(&gens)?;
    IntMatrix::new(n, n, (0..n * n).map(|idx| h.get(idx % n, idx / n).clone()).collect())
}

/// `G = I`, `B = I / q'`: plain modulus switching.
pub fn modulus_reduction_pair(n: usize, q_prime: &BigUint) -> Result<GadgetPair> {
    if n == 0 {
        return Err(Error::param("n", "dimension must be at least 1"));
    }
    gadget_basis(n, 1, q_prime)
}

/// Solves `T c = w` for the upper-triangular-by-columns basis `T` (`w` in the
/// column lattice), returning `None` when `w` is not in it.
fn solve_triangular(t: &IntMatrix, w: &[BigInt]) -> Option<Vec<BigInt>> {
    // Columns of T are the transposed rows of a row-style HNF, so T is lower
    // triangular: row i involves columns 0..=i.
    let n = t.rows();
    let mut c = vec![BigInt::zero(); n];
    for i in 0..n {
        let mut acc = w[i].clone();
        for (j, cj) in c.iter().enumerate().take(i) {
            acc -= t.get(i, j) * cj;
        }
        let p = t.get(i, i);
        if p.is_zero() {
            if !acc.is_zero() {
                return None;
            }
            continue;
        }
        let (qt, rm) = acc.div_rem(p);
        if !rm.is_zero() {
            return None;
        }
        c[i] = qt;
    }
    Some(c)
}

/// A uniformly random `x` in `Z_{q'}^{n'}` with `G^T x = w (mod q')`, where
/// `w = q' v` are the integer numerators of the target coset `v`.
pub fn uniform_preimage<R: Rng + ?Sized>(gp: &GadgetPair, w: &[BigInt], rng: &mut R) -> Result<Vec<BigUint>> {
    let (n, np) = (gp.n(), gp.n_prime());
    if w.len() != n {
        return Err(Error::Dimension {
            what: "preimage target",
            expected: n,
            found: w.len(),
        });
    }
    let qp = &gp.q_prime;
    let inconsistent = || Error::Inconsistent {
        modulus: BigInt::from(qp.clone()),
    };
    match &gp.shape {
        Shape::Gadget { k, q } => {
            let mut x = Vec::with_capacity(np);
            for i in 0..np {
                let x0 = reduce(&w[i * k], qp);
                let mut pw = BigUint::one();
                for j in 0..*k {
                    if reduce(&w[i * k + j], qp) != (&x0 * &pw) % qp {
                        return Err(inconsistent());
                    }
                    pw *= q;
                }
                x.push(x0);
            }
            Ok(x)
        }
        Shape::General => general_preimage(gp, w, rng)?.ok_or_else(inconsistent),
    }
}

fn general_preimage<R: Rng + ?Sized>(gp: &GadgetPair, w: &[BigInt], rng: &mut R) -> Result<Option<Vec<BigUint>>> {
    let (n, np) = (gp.n(), gp.n_prime());
    let qp = &gp.q_prime;
    let qpi = BigInt::from(qp.clone());
    // Rows of M = [G; q' I] generate q' L; H = V M.
    let mut m = IntMatrix::zeros(np + n, n);
    for i in 0..np {
        for j in 0..n {
            m.set(i, j, gp.g.get(i, j).clone());
        }
    }
    for j in 0..n {
        m.set(np + j, j, qpi.clone());
    }
    let (h, v) = hermite_normal_form(&m)?;
    // A V^T = H^T with A = M^T; solve H_top^T u = w.
    let mut ht = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            ht.set(i, j, h.get(j, i).clone());
        }
    }
    let Some(u) = solve_triangular(&ht, w) else {
        return Ok(None);
    };
    let mut x: Vec<BigInt> = (0..np).map(|c| (0..n).map(|r| v.get(r, c) * &u[r]).sum()).collect();

    // Kernel rows of V project onto generators of {x : G^T x = 0 mod q'}.
    let mut gens = IntMatrix::zeros(np + np, np);
    for (row, r) in (n..n + np).enumerate() {
        for c in 0..np {
            gens.set(row, c, v.get(r, c).clone());
        }
    }
    for c in 0..np {
        gens.set(np + c, c, qpi.clone());
    }
    let (kb, _) = hermite_normal_form(&gens)?;
    for i in 0..np {
        let d = kb.get(i, i);
        let count = (&qpi / d).magnitude().clone();
        let c = BigInt::from(uniform_below(rng, &count));
        for (col, xc) in x.iter_mut().enumerate() {
            *xc += &c * kb.get(i, col);
        }
    }
    Ok(Some(x.iter().map(|xi| reduce(xi, qp)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;
    use std::collections::HashMap;

    fn big(x: u32) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn identity_pair() {
        let gp = modulus_reduction_pair(3, &big(16)).unwrap();
        assert_eq!(gp.g, IntMatrix::identity(3));
        assert_eq!(gp.basis_scaled, IntMatrix::identity(3));
        assert!((gp.gs_norm() - 1.0 / 16.0).abs() < 1e-15);
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        let w = vec![BigInt::from(5), BigInt::from(-1), BigInt::from(17)];
        let x = uniform_preimage(&gp, &w, &mut rng).unwrap();
        assert_eq!(x, vec![big(5), big(15), big(1)]);
    }

    #[test]
    fn tradeoff_shape() {
        let gp = gadget_basis(4, 2, &big(4)).unwrap();
        let want = IntMatrix::from_rows(&[vec![1, 4, 0, 0], vec![0, 0, 1, 4]]).unwrap();
        assert_eq!(gp.g, want);
        assert_eq!(gp.q_prime, big(16));
        assert!(gadget_basis(4, 3, &big(4)).is_err());
        for (n, k, q) in [(4, 2, 4u32), (6, 3, 3), (8, 4, 2), (9, 3, 7)] {
            let gp = gadget_basis(n, k, &big(q)).unwrap();
            let rel = (gp.gs_norm() * q as f64 - 1.0).abs();
            assert!(rel < 1e-12);
            for &x in gp.gram_schmidt().norms() {
                assert!((x * q as f64 - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn basis_columns_in_lattice() {
        for (n, k, q) in [(4, 2, 4u32), (6, 3, 3), (4, 4, 5)] {
            let gp = gadget_basis(n, k, &big(q)).unwrap();
            let general = GadgetPair::general(gp.g.clone(), gp.q_prime.clone()).unwrap();
            // Same lattice: equal determinants and mutual containment.
            let d1 = gp.basis_scaled.det().unwrap();
            let d2 = general.basis_scaled.det().unwrap();
            assert_eq!(num_traits::Signed::abs(&d1), num_traits::Signed::abs(&d2));
            for j in 0..n {
                let col = gp.basis_scaled.column(j);
                assert!(general.contains_scaled(&col));
                let mut rng = ChaCha20Rng::seed_from_u64(j as u64);
                let x = uniform_preimage(&gp, &col, &mut rng).unwrap();
                let xb: Vec<BigInt> = x.into_iter().map(BigInt::from).collect();
                let back = gp.g.transpose().mul_vec(&xb).unwrap();
                for (a, b) in back.iter().zip(&col) {
                    assert_eq!(reduce(&(a - b), &gp.q_prime), BigUint::zero());
                }
            }
        }
    }

    #[test]
    fn gadget_inconsistent_target() {
        let gp = gadget_basis(2, 2, &big(2)).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        // (1, 1) would need x = 1 and 2x = 1 mod 4.
        let err = uniform_preimage(&gp, &[BigInt::from(1), BigInt::from(1)], &mut rng).unwrap_err();
        assert!(matches!(err, Error::Inconsistent { .. }));
        let x = uniform_preimage(&gp, &[BigInt::from(3), BigInt::from(2)], &mut rng).unwrap();
        assert_eq!(x, vec![big(3)]);
    }

    #[test]
    fn general_path_matches_gadget() {
        let gp = gadget_basis(4, 2, &big(3)).unwrap();
        let general = GadgetPair::general(gp.g.clone(), gp.q_prime.clone()).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for _ in 0..100 {
            let x: Vec<BigInt> = (0..2).map(|_| BigInt::from(uniform_below(&mut rng, &big(9)))).collect();
            let w = gp.g.transpose().mul_vec(&x).unwrap();
            let a = uniform_preimage(&gp, &w, &mut rng).unwrap();
            let b = uniform_preimage(&general, &w, &mut rng).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn general_preimage_uniform_over_solutions() {
        // G^T = [1 2], q' = 4: x1 + 2 x2 = w mod 4 has four solutions for every w.
        let g = IntMatrix::from_rows(&[vec![1], vec![2]]).unwrap();
        let gp = GadgetPair::general(g, big(4)).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let draws = 40_000;
        let mut counts: HashMap<Vec<BigUint>, usize> = HashMap::new();
        for _ in 0..draws {
            let x = uniform_preimage(&gp, &[BigInt::from(3)], &mut rng).unwrap();
            let lhs = (&x[0] + BigUint::from(2u8) * &x[1]) % big(4);
            assert_eq!(lhs, big(3));
            *counts.entry(x).or_default() += 1;
        }
        assert_eq!(counts.len(), 4);
        let expect = draws as f64 / 4.0;
        let chi2: f64 = counts.values().map(|&c| (c as f64 - expect).powi(2) / expect).sum();
        // 3 degrees of freedom; the 0.999 quantile is 16.27.
        assert!(chi2 < 16.27, "chi2 = {chi2}");
    }
}
