//! The theta series `rho_r(Z + c) = sum_k exp(-pi (k + c)^2 / r^2)`.

use std::f64::consts::{LN_2, PI};

/// `sqrt((t + 4) ln 2 / pi)`: beyond this many widths the Gaussian tail holds
/// less than `2^{-t-2}` of the total mass.
fn tail_scale(bits: u32) -> f64 {
    ((bits as f64 + 4.0) * LN_2 / PI).sqrt()
}

fn wrap_unit(c: f64) -> f64 {
    let f = c - c.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Direct summation over `|k + c| <= r sqrt((t+4) ln 2 / pi) + 1`.
pub fn theta_direct(c: f64, r: f64, bits: u32) -> f64 {
    let c = wrap_unit(c);
    let radius = r * tail_scale(bits) + 1.0;
    let lo = (-c - radius).ceil() as i64;
    let hi = (radius - c).floor() as i64;
    let mut terms: Vec<f64> = (lo..=hi)
        .map(|k| {
            let x = k as f64 + c;
            (-PI * x * x / (r * r)).exp()
        })
        .collect();
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

/// Poisson-summation form `r sum_k exp(-pi k^2 r^2) cos(2 pi c k)`, summed over
/// `|k| <= (1/r) sqrt((t+4) ln 2 / pi) + 1`.
pub fn theta_poisson(c: f64, r: f64, bits: u32) -> f64 {
    let c = wrap_unit(c);
    let kmax = (tail_scale(bits) / r + 1.0).floor() as i64;
    let mut acc = 0.0;
    for k in (1..=kmax).rev() {
        let kf = k as f64;
        acc += 2.0 * (-PI * kf * kf * r * r).exp() * (2.0 * PI * c * kf).cos();
    }
    r * (1.0 + acc)
}

/// `rho_r(Z + c)` to about `bits` bits of relative accuracy: direct summation
/// for `r < 1`, where the series decays quickly, and Poisson summation otherwise.
pub fn theta_coset(c: f64, r: f64, bits: u32) -> f64 {
    if r < 1.0 {
        theta_direct(c, r, bits)
    } else {
        theta_poisson(c, r, bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(c: f64, r: f64) -> f64 {
        let mut terms: Vec<f64> = (-400..=400)
            .map(|k| {
                let x = k as f64 + c;
                (-PI * x * x / (r * r)).exp()
            })
            .collect();
        terms.sort_by(f64::total_cmp);
        terms.iter().sum()
    }

    #[test]
    fn frozen_values() {
        // Oracle: wide direct sums.
        assert!((theta_coset(0.0, 1.0, 60) - 1.086_434_811_213_308).abs() < 1e-12);
        assert!((brute(0.0, 1.0) - 1.086_434_811_213_308).abs() < 1e-12);
        // 2 (1 + 2 e^{-4 pi} + 2 e^{-16 pi} + ...)
        let two = 2.0 * (1.0 + 2.0 * (-4.0 * PI).exp() + 2.0 * (-16.0 * PI).exp());
        assert!((theta_coset(0.0, 2.0, 60) - two).abs() < 1e-13);
        assert!((two - 2.000_013_949_3).abs() < 1e-9);
        let tiny = theta_coset(0.5, 0.1, 60);
        let expect = 2.0 * (-25.0 * PI).exp();
        assert!(((tiny - expect) / expect).abs() < 1e-12);
    }

    #[test]
    fn branches_agree_on_grid() {
        for c in [0.0, 0.25, 0.3, 0.5] {
            for r in [0.9, 1.0, 2.0, 5.0] {
                let d = theta_direct(c, r, 60);
                let p = theta_poisson(c, r, 60);
                assert!(((d - p) / d).abs() <= 1e-10, "c={c} r={r}: {d} vs {p}");
                assert!(((d - brute(c, r)) / d).abs() <= 1e-13);
            }
        }
    }

    #[test]
    fn periodic_in_c() {
        let a = theta_coset(0.3, 1.7, 60);
        let b = theta_coset(-0.7, 1.7, 60);
        let c = theta_coset(0.7, 1.7, 60);
        assert!((a - b).abs() < 1e-14);
        assert!((a - c).abs() < 1e-14);
    }
}
