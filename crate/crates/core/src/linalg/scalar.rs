//! Integer types the linear algebra can run over.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Integer arithmetic with overflow reported as `None`.
///
/// `BigInt` never overflows; the machine integer types let small problems run without
/// allocation and is retried with `BigInt` when it does overflow.
pub trait Scalar: Clone + Eq + Ord + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn from_u64(x: u64) -> Option<Self>;
    fn from_big(x: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn plus(&self, o: &Self) -> Option<Self>;
    fn minus(&self, o: &Self) -> Option<Self>;
    fn times(&self, o: &Self) -> Option<Self>;
    fn negated(&self) -> Option<Self>;
    fn magnitude(&self) -> Option<Self>;
    fn is_neg(&self) -> bool;
    /// Floor division by a nonzero divisor.
    fn floor_div(&self, o: &Self) -> Option<Self>;
    /// Remainder in `[0, o)` for `o > 0`.
    fn floor_mod(&self, o: &Self) -> Self;
}

impl Scalar for BigInt {
    fn nil() -> Self {
        BigInt::zero()
    }
    fn unit() -> Self {
        BigInt::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_u64(x: u64) -> Option<Self> {
        Some(BigInt::from(x))
    }
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn plus(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn minus(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn times(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn negated(&self) -> Option<Self> {
        Some(-self)
    }
    fn magnitude(&self) -> Option<Self> {
        Some(self.abs())
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn floor_div(&self, o: &Self) -> Option<Self> {
        Some(self.div_floor(o))
    }
    fn floor_mod(&self, o: &Self) -> Self {
        self.mod_floor(o)
    }
}

impl Scalar for i128 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn from_u64(x: u64) -> Option<Self> {
        Some(i128::from(x))
    }
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn plus(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn minus(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn times(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn negated(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn magnitude(&self) -> Option<Self> {
        self.checked_abs()
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn floor_div(&self, o: &Self) -> Option<Self> {
        let q = self.checked_div(*o)?;
        if (self % o != 0) && ((*self < 0) != (*o < 0)) {
            q.checked_sub(1)
        } else {
            Some(q)
        }
    }
    fn floor_mod(&self, o: &Self) -> Self {
        self.rem_euclid(*o)
    }
}

impl Scalar for i64 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn from_u64(x: u64) -> Option<Self> {
        i64::try_from(x).ok()
    }
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i64()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn plus(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn minus(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn times(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn negated(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn magnitude(&self) -> Option<Self> {
        self.checked_abs()
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn floor_div(&self, o: &Self) -> Option<Self> {
        let q = self.checked_div(*o)?;
        if (self % o != 0) && ((*self < 0) != (*o < 0)) {
            q.checked_sub(1)
        } else {
            Some(q)
        }
    }
    fn floor_mod(&self, o: &Self) -> Self {
        self.rem_euclid(*o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_operations_agree() {
        for a in -20i64..=20 {
            for b in [-7i64, -3, -1, 1, 2, 5] {
                let (x, y) = (i128::from(a), i128::from(b));
                let (bx, by) = (BigInt::from(a), BigInt::from(b));
                assert_eq!(x.floor_div(&y).unwrap().to_big(), bx.floor_div(&by).unwrap());
                if b > 0 {
                    assert_eq!(x.floor_mod(&y).to_big(), bx.floor_mod(&by));
                }
            }
        }
        assert!(i128::MAX.plus(&1).is_none());
    }
}
