//! Exact rational helpers shared by every stage.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// `base^exp` for a non-negative exponent.
pub fn pow(base: &Q, exp: u32) -> Q {
    let mut acc = Q::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

pub fn floor_int(x: &Q) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil_int(x: &Q) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

/// Smallest multiple of `unit` that is `>= x`.
pub fn ceil_to(x: &Q, unit: &Q) -> Q {
    Q::from_integer(ceil_int(&(x / unit))) * unit
}

/// Largest multiple of `unit` that is `<= x`.
pub fn floor_to(x: &Q, unit: &Q) -> Q {
    Q::from_integer(floor_int(&(x / unit))) * unit
}

pub fn is_multiple(x: &Q, unit: &Q) -> bool {
    (x / unit).is_integer()
}

pub fn to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

/// Lossy conversion for reporting only.
pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn max(a: &Q, b: &Q) -> Q {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn min(a: &Q, b: &Q) -> Q {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn is_pos(x: &Q) -> bool {
    x.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_helpers() {
        assert_eq!(ceil_int(&frac(7, 2)), BigInt::from(4));
        assert_eq!(floor_int(&frac(-7, 2)), BigInt::from(-4));
        assert_eq!(ceil_int(&frac(-7, 2)), BigInt::from(-3));
        assert_eq!(ceil_to(&frac(5, 3), &frac(1, 2)), q(2));
        assert_eq!(floor_to(&frac(5, 3), &frac(1, 2)), frac(3, 2));
        assert!(is_multiple(&q(6), &frac(3, 2)));
        assert_eq!(pow(&frac(1, 2), 6), frac(1, 64));
    }
}
