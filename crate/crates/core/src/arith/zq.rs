//! Residues modulo `q` and the order-`q` torus subgroup.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

use super::gcd::extended_gcd;
use super::torus::TorusElem;
use crate::error::{Error, Result};

/// Reduces a signed integer into `[0, q)`.
pub fn reduce(x: &BigInt, q: &BigUint) -> BigUint {
    let qi = BigInt::from_biguint(Sign::Plus, q.clone());
    x.mod_floor(&qi).to_biguint().expect("mod_floor is nonnegative")
}

/// Representative of `x mod q` in `(-q/2, q/2]`.
pub fn centered(x: &BigUint, q: &BigUint) -> BigInt {
    let x = x % q;
    let twice: BigUint = &x << 1usize;
    if &twice > q {
        BigInt::from(x) - BigInt::from(q.clone())
    } else {
        BigInt::from(x)
    }
}

/// Uniform integer in `[0, q)`.
///
/// Rejection sampling on 32-bit words; num-bigint's own helper is tied to an
/// older `rand` major version.
pub fn uniform_below<R: Rng + ?Sized>(rng: &mut R, q: &BigUint) -> BigUint {
    assert!(!q.is_zero(), "empty range");
    let bits = q.bits();
    let words = bits.div_ceil(32) as usize;
    let top = bits - 32 * (words as u64 - 1);
    let top_mask: u32 = if top == 32 { u32::MAX } else { (1u32 << top) - 1 };
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.random::<u32>()).collect();
        if let Some(last) = digits.last_mut() {
            *last &= top_mask;
        }
        let x = BigUint::new(digits);
        if &x < q {
            return x;
        }
    }
}

/// Inverse of `x` modulo `q`, if it exists.
pub fn inverse_mod(x: &BigInt, q: &BigUint) -> Option<BigUint> {
    let qi = BigInt::from(q.clone());
    let xr = x.mod_floor(&qi);
    if xr.is_zero() {
        return if q.is_one() { Some(BigUint::zero()) } else { None };
    }
    let (g, s, _) = extended_gcd(&xr, &qi).ok()?;
    if !g.is_one() {
        return None;
    }
    Some(reduce(&s, q))
}

pub(crate) fn check_modulus(q: &BigUint, field: &'static str) -> Result<()> {
    if q < &BigUint::from(2u8) {
        return Err(Error::param(field, format!("modulus must be at least 2, got {q}")));
    }
    Ok(())
}

/// An element of `Z_q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZqElem {
    value: BigUint,
    modulus: BigUint,
}

impl ZqElem {
    pub fn new(value: &BigInt, modulus: &BigUint) -> Result<Self> {
        check_modulus(modulus, "q")?;
        Ok(ZqElem {
            value: reduce(value, modulus),
            modulus: modulus.clone(),
        })
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn centered(&self) -> BigInt {
        centered(&self.value, &self.modulus)
    }

    pub fn add(&self, other: &ZqElem) -> ZqElem {
        debug_assert_eq!(self.modulus, other.modulus);
        ZqElem {
            value: (&self.value + &other.value) % &self.modulus,
            modulus: self.modulus.clone(),
        }
    }

    pub fn sub(&self, other: &ZqElem) -> ZqElem {
        debug_assert_eq!(self.modulus, other.modulus);
        ZqElem {
            value: (&self.value + &self.modulus - &other.value) % &self.modulus,
            modulus: self.modulus.clone(),
        }
    }

    pub fn mul(&self, other: &ZqElem) -> ZqElem {
        debug_assert_eq!(self.modulus, other.modulus);
        ZqElem {
            value: (&self.value * &other.value) % &self.modulus,
            modulus: self.modulus.clone(),
        }
    }

    pub fn neg(&self) -> ZqElem {
        ZqElem {
            value: (&self.modulus - &self.value) % &self.modulus,
            modulus: self.modulus.clone(),
        }
    }

    pub fn inverse(&self) -> Option<ZqElem> {
        inverse_mod(&BigInt::from(self.value.clone()), &self.modulus).map(|value| ZqElem {
            value,
            modulus: self.modulus.clone(),
        })
    }
}

impl fmt::Debug for ZqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// The point `numerator / q` of the torus.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TorusQElem {
    numerator: BigUint,
    q: BigUint,
}

impl TorusQElem {
    pub fn new(numerator: &BigInt, q: &BigUint) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::param("q", "modulus must be positive"));
        }
        Ok(TorusQElem {
            numerator: reduce(numerator, q),
            q: q.clone(),
        })
    }

    pub fn from_numerator(numerator: BigUint, q: &BigUint) -> Self {
        TorusQElem {
            numerator: numerator % q,
            q: q.clone(),
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    pub fn add(&self, other: &TorusQElem) -> TorusQElem {
        debug_assert_eq!(self.q, other.q);
        TorusQElem {
            numerator: (&self.numerator + &other.numerator) % &self.q,
            q: self.q.clone(),
        }
    }

    pub fn sub(&self, other: &TorusQElem) -> TorusQElem {
        debug_assert_eq!(self.q, other.q);
        TorusQElem {
            numerator: (&self.numerator + &self.q - &other.numerator) % &self.q,
            q: self.q.clone(),
        }
    }

    pub fn neg(&self) -> TorusQElem {
        TorusQElem {
            numerator: (&self.q - &self.numerator) % &self.q,
            q: self.q.clone(),
        }
    }

    /// Nearest point at `bits` precision; the flag reports exactness.
    pub fn to_torus(&self, bits: u32) -> (TorusElem, bool) {
        TorusElem::from_ratio(&self.numerator, &self.q, bits)
    }

    /// Nearest subgroup element to a continuous torus point.
    pub fn nearest(t: &TorusElem, q: &BigUint) -> TorusQElem {
        TorusQElem {
            numerator: t.nearest_grid(q),
            q: q.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let n = self.numerator.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        n / q
    }
}

impl fmt::Debug for TorusQElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn bu(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn zq_ring_ops() {
        let q = bu(12);
        let a = ZqElem::new(&BigInt::from(-1), &q).unwrap();
        assert_eq!(a.value(), &bu(11));
        let b = ZqElem::new(&BigInt::from(5), &q).unwrap();
        assert_eq!(a.add(&b).value(), &bu(4));
        assert_eq!(b.sub(&a).value(), &bu(6));
        assert_eq!(a.mul(&b).value(), &bu(7));
        assert_eq!(b.inverse().unwrap().value(), &bu(5));
        assert!(ZqElem::new(&BigInt::from(4), &q).unwrap().inverse().is_none());
        assert_eq!(a.centered(), BigInt::from(-1));
        assert!(ZqElem::new(&BigInt::from(1), &bu(1)).is_err());
    }

    #[test]
    fn centered_half_goes_positive() {
        assert_eq!(centered(&bu(4), &bu(8)), BigInt::from(4));
        assert_eq!(centered(&bu(5), &bu(8)), BigInt::from(-3));
    }

    #[test]
    fn torus_q_wraps() {
        let q = bu(8);
        let a = TorusQElem::from_numerator(bu(6), &q);
        let b = TorusQElem::from_numerator(bu(5), &q);
        assert_eq!(a.add(&b).numerator(), &bu(3));
        assert_eq!(b.sub(&a).numerator(), &bu(7));
        assert_eq!(a.neg().numerator(), &bu(2));
    }

    #[test]
    fn uniform_below_covers_range() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let q = bu(5);
        let mut seen = [0u32; 5];
        for _ in 0..5000 {
            let x = uniform_below(&mut rng, &q);
            seen[usize::try_from(x.to_u64_digits().first().copied().unwrap_or(0)).unwrap()] += 1;
        }
        assert!(seen.iter().all(|&c| c > 850 && c < 1150), "{seen:?}");
        let big = BigUint::from(1u8) << 130usize;
        for _ in 0..100 {
            assert!(uniform_below(&mut rng, &big) < big);
        }
    }

    #[test]
    fn round_trip_through_fixed_point() {
        for q in [2u64, 3, 7, 8, 255, 1000, 65535] {
            for k in [0u64, 1, q / 2, q - 1] {
                let e = TorusQElem::from_numerator(bu(k), &bu(q));
                let (t, _) = e.to_torus(16);
                assert_eq!(TorusQElem::nearest(&t, &bu(q)), e);
            }
        }
    }
}
