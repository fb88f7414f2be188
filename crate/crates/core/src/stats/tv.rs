//! Statistical distance: exact on finite tables, binned and estimated on samples.

use std::collections::HashMap;
use std::hash::Hash;

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::arith::TorusElem;
use crate::error::{Error, Result};
use crate::lwe::{LweSample, SampleBatch};

/// `sum |p_i - q_i| / 2` for two distributions on the same finite support.
pub fn exact_tv(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Dimension {
            what: "distribution support",
            expected: p.len(),
            found: q.len(),
        });
    }
    Ok(p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0)
}

/// `max_i (1 - p_i / q_i)` over the support of `q`: the least `eps` with
/// `p >= (1 - eps) q` pointwise.
pub fn separation_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Dimension {
            what: "distribution support",
            expected: p.len(),
            found: q.len(),
        });
    }
    Ok(p.iter()
        .zip(q)
        .filter(|(_, &b)| b > 0.0)
        .map(|(a, b)| 1.0 - a / b)
        .fold(0.0, f64::max))
}

/// How samples are cut into cells: `T_q` coordinates are kept exactly and
/// each `T` coordinate is cut into `torus_bins` equal intervals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BinningSpec {
    pub torus_bins: usize,
}

impl BinningSpec {
    pub fn new(torus_bins: usize) -> Result<Self> {
        if torus_bins < 2 {
            return Err(Error::param(
                "torus_bins",
                format!("need at least 2 bins, got {torus_bins}"),
            ));
        }
        Ok(BinningSpec { torus_bins })
    }

    pub fn bin(&self, t: &TorusElem) -> u64 {
        let k = (t.to_f64() * self.torus_bins as f64).floor() as u64;
        k.min(self.torus_bins as u64 - 1)
    }

    /// Cell of one sample: the numerators of `a` followed by the bin of `b`.
    pub fn key(&self, s: &LweSample) -> Vec<u64> {
        let mut k: Vec<u64> = s.a.iter().map(|x| x.to_u64().unwrap_or(u64::MAX)).collect();
        k.push(self.bin(&s.b));
        k
    }

    pub fn keys(&self, batch: &SampleBatch) -> Vec<Vec<u64>> {
        batch.samples.iter().map(|s| self.key(s)).collect()
    }

    /// Cell of a whole batch, for distributions over batches.
    pub fn batch_key(&self, batch: &SampleBatch) -> Vec<u64> {
        batch.samples.iter().flat_map(|s| self.key(s)).collect()
    }
}

/// Plug-in binned distance between two samples with the same cell keys.
pub fn binned_tv<K: Hash + Eq>(a: &[K], b: &[K]) -> f64 {
    let mut counts: HashMap<&K, (u64, u64)> = HashMap::new();
    for k in a {
        counts.entry(k).or_default().0 += 1;
    }
    for k in b {
        counts.entry(k).or_default().1 += 1;
    }
    let (na, nb) = (a.len().max(1) as f64, b.len().max(1) as f64);
    let mut terms: Vec<f64> = counts
        .values()
        .map(|&(x, y)| (x as f64 / na - y as f64 / nb).abs())
        .collect();
    terms.sort_by(f64::total_cmp);
    (terms.iter().sum::<f64>() / 2.0).min(1.0)
}

/// Binned distance with its sampling uncertainty.
///
/// The plug-in estimate is biased upward: two samples of one distribution
/// over `K` cells differ by about `sqrt(K / (pi N))`. `null_mean` and
/// `null_sd` are the mean and spread of the estimate under the hypothesis
/// that both samples come from the same law, obtained by random
/// relabelling of the pooled samples. `ci` is a percentile bootstrap
/// interval for the plug-in value.
#[derive(Clone, Debug, PartialEq)]
pub struct TvEstimate {
    pub tv: f64,
    pub ci: (f64, f64),
    pub null_mean: f64,
    pub null_sd: f64,
    /// Distinct cells seen in either sample.
    pub bins: usize,
    pub n_a: usize,
    pub n_b: usize,
}

impl TvEstimate {
    /// Plug-in value minus its bias under the null.
    pub fn excess(&self) -> f64 {
        self.tv - self.null_mean
    }

    /// Monte Carlo standard error of the estimate.
    pub fn se(&self) -> f64 {
        self.null_sd
    }

    /// Whether the bias-corrected distance is at most `budget + k * se`.
    pub fn within(&self, budget: f64, k: f64) -> bool {
        self.excess() <= budget + k * self.se()
    }
}

fn dense_tv(a: &[u32], b: &[u32], cells: usize, scratch: &mut [i64]) -> f64 {
    scratch.iter_mut().for_each(|x| *x = 0);
    let (na, nb) = (a.len() as i64, b.len() as i64);
    // Counts scaled to the common denominator na * nb.
    for &k in a {
        scratch[k as usize] += nb;
    }
    for &k in b {
        scratch[k as usize] -= na;
    }
    let num: i64 = scratch[..cells].iter().map(|x| x.abs()).sum();
    num as f64 / (2.0 * na as f64 * nb as f64)
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, var.sqrt())
}

/// Estimates the binned distance between the laws of `a` and `b` with
/// `replicates` bootstrap and relabelling rounds each.
pub fn empirical_tv<K: Hash + Eq, R: Rng + ?Sized>(
    a: &[K],
    b: &[K],
    replicates: usize,
    rng: &mut R,
) -> Result<TvEstimate> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::param("samples", "both samples must be nonempty"));
    }
    if replicates < 2 {
        return Err(Error::param("replicates", "need at least 2"));
    }
    let mut ids: HashMap<&K, u32> = HashMap::new();
    let mut dense = |k| {
        let next = ids.len() as u32;
        *ids.entry(k).or_insert(next)
    };
    let da: Vec<u32> = a.iter().map(&mut dense).collect();
    let db: Vec<u32> = b.iter().map(&mut dense).collect();
    let cells = ids.len();
    let mut scratch = vec![0i64; cells];
    let tv = dense_tv(&da, &db, cells, &mut scratch);

    let mut boot = Vec::with_capacity(replicates);
    let (mut ra, mut rb) = (vec![0u32; da.len()], vec![0u32; db.len()]);
    for _ in 0..replicates {
        for x in ra.iter_mut() {
            *x = da[rng.random_range(0..da.len())];
        }
        for x in rb.iter_mut() {
            *x = db[rng.random_range(0..db.len())];
        }
        boot.push(dense_tv(&ra, &rb, cells, &mut scratch));
    }
    boot.sort_by(f64::total_cmp);
    let pct = |p: f64| boot[((p * (replicates - 1) as f64).round() as usize).min(replicates - 1)];

    let mut pool: Vec<u32> = da.iter().chain(&db).copied().collect();
    let mut null = Vec::with_capacity(replicates);
    for _ in 0..replicates {
        pool.shuffle(rng);
        let (x, y) = pool.split_at(da.len());
        null.push(dense_tv(x, y, cells, &mut scratch));
    }
    let (null_mean, null_sd) = mean_sd(&null);
    Ok(TvEstimate {
        tv,
        ci: (pct(0.025), pct(0.975)),
        null_mean,
        null_sd,
        bins: cells,
        n_a: a.len(),
        n_b: b.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn uniform_against_point_mass() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let a: Vec<u8> = (0..20_000).map(|_| rng.random_range(0..2)).collect();
        let b = vec![0u8; 20_000];
        let est = empirical_tv(&a, &b, 50, &mut rng).unwrap();
        assert!((est.tv - 0.5).abs() < 0.02);
        assert!(est.ci.0 <= est.tv && est.tv <= est.ci.1);
    }

    #[test]
    fn disjoint_supports() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let a: Vec<u32> = (0..1000).map(|_| rng.random_range(0..10)).collect();
        let b: Vec<u32> = (0..1000).map(|_| rng.random_range(10..20)).collect();
        let est = empirical_tv(&a, &b, 20, &mut rng).unwrap();
        assert_eq!(est.tv, 1.0);
    }

    #[test]
    fn same_law_is_inside_the_null_envelope() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let a: Vec<u32> = (0..50_000).map(|_| rng.random_range(0..256)).collect();
        let b: Vec<u32> = (0..50_000).map(|_| rng.random_range(0..256)).collect();
        let est = empirical_tv(&a, &b, 100, &mut rng).unwrap();
        // Plug-in bias for 256 equiprobable cells is about sqrt(256 / (pi N)).
        let bias = (256.0 / (std::f64::consts::PI * 50_000.0)).sqrt();
        assert!((est.null_mean - bias).abs() < 0.2 * bias, "{} vs {bias}", est.null_mean);
        assert!(est.within(0.0, 3.0), "{est:?}");
    }

    #[test]
    fn separation_bounds_distance() {
        let p = [0.3, 0.3, 0.4];
        let q = [0.25, 0.35, 0.4];
        let eps = separation_distance(&p, &q).unwrap();
        assert!((eps - (1.0 - 0.3 / 0.35)).abs() < 1e-15);
        assert!(exact_tv(&p, &q).unwrap() <= eps);
    }

    proptest! {
        #[test]
        fn binned_tv_is_symmetric_and_bounded(a in proptest::collection::vec(0u8..6, 1..200),
                                              b in proptest::collection::vec(0u8..6, 1..200)) {
            let x = binned_tv(&a, &b);
            let y = binned_tv(&b, &a);
            prop_assert!((x - y).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&x));
            let mut scratch = vec![0i64; 6];
            let da: Vec<u32> = a.iter().map(|&v| v as u32).collect();
            let db: Vec<u32> = b.iter().map(|&v| v as u32).collect();
            prop_assert!((dense_tv(&da, &db, 6, &mut scratch) - x).abs() < 1e-12);
        }

        #[test]
        fn separation_claim(raw in proptest::collection::vec(0.01f64..1.0, 2..12),
                            noise in proptest::collection::vec(0.0f64..1.0, 12),
                            eps in 0.0f64..0.5) {
            // Q arbitrary, P = (1 - eps) Q + eps R for some distribution R.
            let zq: f64 = raw.iter().sum();
            let q: Vec<f64> = raw.iter().map(|x| x / zq).collect();
            let rr: Vec<f64> = noise[..q.len()].iter().map(|x| x + 1e-3).collect();
            let zr: f64 = rr.iter().sum();
            let p: Vec<f64> = q.iter().zip(&rr).map(|(a, b)| (1.0 - eps) * a + eps * b / zr).collect();
            prop_assert!(p.iter().zip(&q).all(|(a, b)| *a >= (1.0 - eps) * b - 1e-15));
            prop_assert!(exact_tv(&p, &q).unwrap() <= eps + 1e-12);
            prop_assert!(separation_distance(&p, &q).unwrap() <= eps + 1e-12);
        }
    }
}
