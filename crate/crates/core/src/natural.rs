//! Exact unsigned integer backends.
//!
//! Every kernel in this crate is generic over [`Natural`], implemented for
//! `u128` (checked, overflow is an [`Error::Overflow`]) and for
//! [`num_bigint::BigUint`] (never overflows). Nothing here wraps silently.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, ToPrimitive};

use crate::error::{Error, Result};

/// An exact unsigned integer usable as a tree value.
pub trait Natural:
    Clone
    + Ord
    + Hash
    + Debug
    + Display
    + FromStr
    + Integer
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// Lift a machine integer.
    fn small(v: u64) -> Self {
        Self::from_u64(v).expect("every backend holds u64")
    }

    fn add_exact(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(rhs).ok_or(Error::Overflow)
    }

    fn mul_exact(&self, rhs: &Self) -> Result<Self> {
        self.checked_mul(rhs).ok_or(Error::Overflow)
    }

    fn mul_small(&self, rhs: u64) -> Result<Self> {
        self.mul_exact(&Self::small(rhs))
    }

    fn add_small(&self, rhs: u64) -> Result<Self> {
        self.add_exact(&Self::small(rhs))
    }

    /// `self - rhs`, or `None` when it would go negative.
    fn sub_small(&self, rhs: u64) -> Option<Self> {
        self.checked_sub(&Self::small(rhs))
    }

    fn pow_exact(base: u64, exp: u32) -> Result<Self> {
        num_traits::checked_pow(Self::small(base), exp as usize).ok_or(Error::Overflow)
    }

    /// `self * 2^k`.
    fn shl_exact(&self, k: u32) -> Result<Self> {
        self.mul_exact(&Self::pow_exact(2, k)?)
    }

    /// Split `self` into `cofactor * p^k` with `p` not dividing the cofactor.
    /// Zero is returned unchanged with `k = 0`.
    fn valuation(&self, p: u64) -> (Self, u32) {
        let p = Self::small(p);
        let mut x = self.clone();
        let mut k = 0;
        if x.is_zero() {
            return (x, 0);
        }
        loop {
            let (q, r) = x.div_rem(&p);
            if !r.is_zero() {
                return (x, k);
            }
            x = q;
            k += 1;
        }
    }

    /// Residue modulo a small positive modulus.
    fn rem_small(&self, m: u64) -> u64 {
        self.mod_floor(&Self::small(m))
            .to_u64()
            .expect("residue below modulus")
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    fn is_unit(&self) -> bool {
        self.is_one()
    }
}

impl Natural for u128 {}
impl Natural for BigUint {}

/// Reject zero, the only non-value of the backends.
pub(crate) fn positive<V: Natural>(v: &V) -> Result<()> {
    if v.is_zero() {
        Err(Error::Zero)
    } else {
        Ok(())
    }
}

pub(crate) fn require_odd<V: Natural>(v: &V) -> Result<()> {
    positive(v)?;
    if v.is_even() {
        return Err(Error::NotOdd(v.to_string()));
    }
    Ok(())
}

pub(crate) fn require_even<V: Natural>(v: &V) -> Result<()> {
    positive(v)?;
    if v.is_odd() {
        return Err(Error::NotEven(v.to_string()));
    }
    Ok(())
}

/// Convert between backends, failing if the target is too narrow.
pub fn convert<A: Natural, B: Natural>(a: &A) -> Result<B> {
    let text = a.to_string();
    text.parse::<B>().map_err(|_| Error::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_splits_prime_powers() {
        assert_eq!(3078u128.valuation(2), (1539, 1));
        assert_eq!(1539u128.valuation(3), (19, 4));
        assert_eq!(7u128.valuation(2), (7, 0));
        assert_eq!(0u128.valuation(3), (0, 0));
    }

    #[test]
    fn u128_overflow_is_reported() {
        assert_eq!(u128::pow_exact(2, 128), Err(Error::Overflow));
        assert_eq!(u128::MAX.add_small(1), Err(Error::Overflow));
        assert!(BigUint::pow_exact(2, 400).is_ok());
    }

    #[test]
    fn convert_narrows_with_error() {
        let big = BigUint::pow_exact(3, 100).unwrap();
        assert_eq!(convert::<BigUint, u128>(&big), Err(Error::Overflow));
        assert_eq!(convert::<u128, BigUint>(&242).unwrap(), BigUint::small(242));
    }
}
