//! Pearson chi-square goodness of fit against a [`PmfTable`].

use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::pmf::PmfTable;
use crate::error::{Error, Result};

/// Minimum expected count per merged cell.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Clone, Debug, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Cells left after merging.
    pub cells: usize,
}

/// Tests observed counts against `pmf`. `counts[i]` is the number of draws
/// at `pmf.support[i]`; `outside` counts draws that fell off the table.
///
/// Cells are merged in support order until each expects at least
/// [`MIN_EXPECTED`] draws; the remainder and `outside` join the last cell.
pub fn chi_square_gof(counts: &[u64], outside: u64, pmf: &PmfTable) -> Result<ChiSquare> {
    if counts.len() != pmf.len() {
        return Err(Error::Dimension {
            what: "counts",
            expected: pmf.len(),
            found: counts.len(),
        });
    }
    let total = counts.iter().sum::<u64>() + outside;
    if total == 0 {
        return Err(Error::param("counts", "no observations"));
    }
    let n = total as f64;
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for (c, p) in counts.iter().zip(&pmf.probs) {
        obs += *c as f64;
        exp += p * n;
        if exp >= MIN_EXPECTED {
            cells.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    obs += outside as f64;
    exp += pmf.truncation_mass_bound.min(1.0) * n;
    match cells.last_mut() {
        Some(last) => {
            last.0 += obs;
            last.1 += exp;
        }
        None => cells.push((obs, exp)),
    }
    if cells.len() < 2 {
        return Err(Error::param(
            "pmf",
            "only one cell left after merging; the distribution is degenerate for this sample size",
        ));
    }
    let mut terms: Vec<f64> = cells.iter().map(|(o, e)| (o - e) * (o - e) / e).collect();
    terms.sort_by(f64::total_cmp);
    let statistic: f64 = terms.iter().sum();
    let dof = cells.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::param("dof", e.to_string()))?;
    Ok(ChiSquare {
        statistic,
        dof,
        p_value: dist.sf(statistic),
        cells: cells.len(),
    })
}

/// Counts draws by their basis coefficients.
pub fn tally<'a>(pmf: &PmfTable, draws: impl IntoIterator<Item = &'a [i64]>) -> (Vec<u64>, u64) {
    let mut counts = vec![0u64; pmf.len()];
    let mut outside = 0;
    for j in draws {
        match pmf.lookup(j) {
            Some(i) => counts[i] += 1,
            None => outside += 1,
        }
    }
    (counts, outside)
}
