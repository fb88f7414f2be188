//! Points of the continuous torus `R/Z`, stored as unsigned fixed-point fractions.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default fixed-point precision of torus points.
pub const DEFAULT_PRECISION: u32 = 64;

/// Largest supported precision.
pub const MAX_PRECISION: u32 = 128;

/// A point `raw / 2^bits` of the torus.
///
/// Arithmetic wraps modulo 1 exactly at `bits`-bit granularity. Converting an
/// element of the order-`q` subgroup is exact when `q` divides `2^bits`;
/// otherwise the nearest representable point is taken, which is off by at most
/// `2^{-bits-1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusElem {
    raw: u128,
    bits: u32,
}

#[inline]
fn mask(bits: u32) -> u128 {
    if bits == 128 {
        u128::MAX
    } else {
        (1u128 << bits) - 1
    }
}

pub(crate) fn check_precision(bits: u32) -> Result<()> {
    if bits == 0 || bits > MAX_PRECISION {
        return Err(Error::param(
            "F",
            format!("precision must be in 1..={MAX_PRECISION}, got {bits}"),
        ));
    }
    Ok(())
}

impl TorusElem {
    pub fn zero(bits: u32) -> Self {
        debug_assert!((1..=MAX_PRECISION).contains(&bits));
        TorusElem { raw: 0, bits }
    }

    /// Builds a point from its raw fraction; bits above the precision are dropped.
    pub fn from_raw(raw: u128, bits: u32) -> Self {
        debug_assert!((1..=MAX_PRECISION).contains(&bits));
        TorusElem {
            raw: raw & mask(bits),
            bits,
        }
    }

    pub fn raw(&self) -> u128 {
        self.raw
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Nearest point to `x mod 1`.
    pub fn from_f64(x: f64, bits: u32) -> Self {
        let frac = x - x.floor();
        // frac * 2^bits, rounded; f64 keeps 53 significant bits, the rest are zero.
        let scaled = frac * 2f64.powi(bits as i32);
        let raw = if scaled >= 2f64.powi(bits as i32) {
            0
        } else {
            scaled.round() as u128
        };
        TorusElem::from_raw(raw, bits)
    }

    /// Nearest point to `numerator / q`; the flag reports whether it is exact.
    pub fn from_ratio(numerator: &BigUint, q: &BigUint, bits: u32) -> (Self, bool) {
        let num = numerator % q;
        let scaled: BigUint = num << bits as usize;
        let (quot, rem) = scaled.div_rem(q);
        let twice: BigUint = &rem << 1usize;
        let rounded = if &twice >= q { quot + 1u32 } else { quot };
        let raw = low_u128(&rounded);
        (TorusElem::from_raw(raw, bits), rem.is_zero())
    }

    /// Value in `[0, 1)`.
    pub fn to_f64(&self) -> f64 {
        self.raw as f64 / 2f64.powi(self.bits as i32)
    }

    /// Representative in `[-1/2, 1/2)`.
    pub fn centered(&self) -> f64 {
        let x = self.to_f64();
        if x >= 0.5 {
            x - 1.0
        } else {
            x
        }
    }

    /// Multiplication by an integer, mod 1.
    pub fn mul_int(&self, k: &BigInt) -> Self {
        let modulus = BigInt::from(1u8) << self.bits as usize;
        let k = k.mod_floor(&modulus);
        let k = low_u128(k.magnitude());
        TorusElem::from_raw(self.raw.wrapping_mul(k), self.bits)
    }

    /// `ceil(q * self)` as an integer, together with the gap
    /// `ceil(q * self) - q * self` in `[0, 1)`.
    ///
    /// This is the exact bookkeeping needed to sample from the coset
    /// `q^{-1} Z - self` and land back on the order-`q` grid.
    pub fn ceil_scaled(&self, q: &BigUint) -> (BigUint, f64) {
        let prod = q * BigUint::from(self.raw);
        let (quot, rem) = prod.div_rem(&(BigUint::from(1u8) << self.bits as usize));
        if rem.is_zero() {
            (quot, 0.0)
        } else {
            let gap = (BigUint::from(1u8) << self.bits as usize) - rem;
            let gap = gap.to_f64().unwrap_or(0.0) / 2f64.powi(self.bits as i32);
            (quot + 1u32, gap)
        }
    }

    /// Nearest element `k / q` of the order-`q` subgroup, returned as `k`.
    pub fn nearest_grid(&self, q: &BigUint) -> BigUint {
        let prod = q * BigUint::from(self.raw);
        let half = BigUint::from(1u8) << (self.bits as usize - 1);
        let k = (prod + half) >> self.bits as usize;
        k % q
    }

    /// Hexadecimal rendering of the raw fraction, zero-padded to `ceil(bits/4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.bits.div_ceil(4) as usize;
        format!("{:0width$x}", self.raw, width = digits)
    }

    pub fn from_hex(s: &str, bits: u32) -> Result<Self> {
        check_precision(bits)?;
        let raw = u128::from_str_radix(s, 16).map_err(|e| Error::param("b", format!("bad hex fraction {s:?}: {e}")))?;
        if raw & !mask(bits) != 0 {
            return Err(Error::param("b", format!("hex fraction {s:?} exceeds {bits} bits")));
        }
        Ok(TorusElem { raw, bits })
    }
}

fn low_u128(x: &BigUint) -> u128 {
    let digits = x.to_u64_digits();
    let lo = digits.first().copied().unwrap_or(0) as u128;
    let hi = digits.get(1).copied().unwrap_or(0) as u128;
    lo | (hi << 64)
}

impl Add for TorusElem {
    type Output = TorusElem;
    fn add(self, rhs: TorusElem) -> TorusElem {
        debug_assert_eq!(self.bits, rhs.bits);
        TorusElem::from_raw(self.raw.wrapping_add(rhs.raw), self.bits)
    }
}

impl AddAssign for TorusElem {
    fn add_assign(&mut self, rhs: TorusElem) {
        *self = *self + rhs;
    }
}

impl Sub for TorusElem {
    type Output = TorusElem;
    fn sub(self, rhs: TorusElem) -> TorusElem {
        debug_assert_eq!(self.bits, rhs.bits);
        TorusElem::from_raw(self.raw.wrapping_sub(rhs.raw), self.bits)
    }
}

impl SubAssign for TorusElem {
    fn sub_assign(&mut self, rhs: TorusElem) {
        *self = *self - rhs;
    }
}

impl Neg for TorusElem {
    type Output = TorusElem;
    fn neg(self) -> TorusElem {
        TorusElem::from_raw(self.raw.wrapping_neg(), self.bits)
    }
}

impl fmt::Debug for TorusElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T[{}; {}b]", self.to_f64(), self.bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wraps_mod_one() {
        let a = TorusElem::from_f64(0.75, 64);
        let b = TorusElem::from_f64(0.5, 64);
        assert_eq!((a + b).to_f64(), 0.25);
        assert_eq!((b - a).to_f64(), 0.75);
        assert_eq!((-a).to_f64(), 0.25);
    }

    #[test]
    fn small_precision_wraps() {
        let a = TorusElem::from_raw(7, 3);
        let b = TorusElem::from_raw(3, 3);
        assert_eq!((a + b).raw(), 2);
        assert_eq!(TorusElem::from_raw(15, 3).raw(), 7);
    }

    #[test]
    fn ratio_exact_for_power_of_two() {
        let (t, exact) = TorusElem::from_ratio(&BigUint::from(3u8), &BigUint::from(8u8), 64);
        assert!(exact);
        assert_eq!(t.to_f64(), 0.375);
        let (_, exact) = TorusElem::from_ratio(&BigUint::from(1u8), &BigUint::from(3u8), 64);
        assert!(!exact);
    }

    #[test]
    fn ratio_rounding_error_bounded() {
        let q = BigUint::from(12345u32);
        for k in [1u32, 17, 6000, 12344] {
            let (t, _) = TorusElem::from_ratio(&BigUint::from(k), &q, 20);
            let err = (t.to_f64() - k as f64 / 12345.0).abs();
            assert!(err <= 2f64.powi(-21) + 1e-15);
        }
    }

    #[test]
    fn grid_round_trip_huge_modulus() {
        let q = BigUint::from(1u8) << 100usize;
        let k = (BigUint::from(1u8) << 99usize) + 12345u32;
        let (t, exact) = TorusElem::from_ratio(&k, &q, 128);
        assert!(exact);
        assert_eq!(t.nearest_grid(&q), k);
    }

    #[test]
    fn hex_round_trip() {
        let t = TorusElem::from_raw(0xdead_beef, 37);
        let s = t.to_hex();
        assert_eq!(s.len(), 10);
        assert_eq!(TorusElem::from_hex(&s, 37).unwrap(), t);
        assert!(TorusElem::from_hex("ff", 4).is_err());
    }

    #[test]
    fn ceil_scaled_lands_on_grid() {
        let q = BigUint::from(5u8);
        let t = TorusElem::from_f64(0.3, 64);
        let (c, gap) = t.ceil_scaled(&q);
        assert_eq!(c, BigUint::from(2u8));
        assert!((gap - 0.5).abs() < 1e-12);
        let t = TorusElem::from_ratio(&BigUint::from(1u8), &BigUint::from(4u8), 64).0;
        let (c, gap) = t.ceil_scaled(&BigUint::from(8u8));
        assert_eq!(c, BigUint::from(2u8));
        assert_eq!(gap, 0.0);
    }

    #[test]
    fn mul_int_negative() {
        let t = TorusElem::from_f64(0.25, 64);
        assert_eq!(t.mul_int(&BigInt::from(-3)).to_f64(), 0.25);
    }
}
