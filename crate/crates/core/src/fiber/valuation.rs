//! 2-adic valuations.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{EngineError, Result};

/// Exponent of the largest power of 2 dividing `n >= 1`.
pub fn v2(n: i64) -> Result<u32> {
    if n <= 0 {
        return Err(EngineError::Usage(format!("v2 is defined for positive integers, got {n}")));
    }
    Ok(n.trailing_zeros())
}

/// `v2` of a nonzero big integer.
pub fn v2_big(n: &BigInt) -> Result<u64> {
    if n.is_zero() {
        return Err(EngineError::Usage("v2 of zero".into()));
    }
    Ok(n.trailing_zeros().unwrap_or(0))
}

/// `v2(3^n - 1)`: 1 for odd `n`, `2 + v2(n)` for even `n`.
pub fn val_3n_minus_1(n: i64) -> Result<u32> {
    let v = v2(n)?;
    Ok(if v == 0 { 1 } else { 2 + v })
}

/// `3^n - 1` exactly.
pub fn three_pow_minus_one(n: u32) -> BigInt {
    BigInt::from(3).pow(n) - BigInt::one()
}

/// 2-primary part of `9^k - 1`, the order of `iota v1^{2k}` for `k >= 1`.
pub fn iota_order(k: u32) -> Result<u64> {
    if k == 0 {
        return Ok(0);
    }
    Ok(1u64 << val_3n_minus_1(2 * k as i64)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(v2(8).unwrap(), 3);
        assert_eq!(v2(12).unwrap(), 2);
        assert_eq!(v2(1).unwrap(), 0);
        assert!(v2(0).is_err());
        assert_eq!(val_3n_minus_1(1).unwrap(), 1);
        assert_eq!(val_3n_minus_1(2).unwrap(), 3);
        assert_eq!(val_3n_minus_1(4).unwrap(), 4);
        assert!(val_3n_minus_1(-3).is_err());
    }

    #[test]
    fn iota_orders() {
        assert_eq!(iota_order(0).unwrap(), 0);
        assert_eq!(iota_order(1).unwrap(), 8);
        assert_eq!(iota_order(2).unwrap(), 16);
        assert_eq!(iota_order(3).unwrap(), 8);
        assert_eq!(iota_order(4).unwrap(), 32);
    }
}
