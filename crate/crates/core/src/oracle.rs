//! Fixed-point reference values for `ln`, `ln_1p` and `exp`.
//!
//! Numbers are big integers scaled by `2^FRAC_BITS` (192 bits, about 57
//! decimal digits). Logarithms use `ln m = 2 atanh((m-1)/(m+1))` after
//! reducing the argument to `m` in `[1, 2)`; the exponential reduces by
//! `ln 2`, halves ten more times, sums the Taylor series and squares back.
//! The absolute error stays below `2^-170` on the sampled domains, far
//! under the one-ulp gap separating a widened endpoint from the true value.

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::interval::Interval;

pub const FRAC_BITS: u64 = 192;

fn unit() -> BigInt {
    BigInt::one() << FRAC_BITS
}

/// `x * 2^FRAC_BITS`, rounded toward negative infinity.
pub fn fixed_floor(x: f64) -> BigInt {
    let (mant, exp) = decompose(x);
    let shift = exp + FRAC_BITS as i64;
    if shift >= 0 {
        mant << shift as u64
    } else {
        // BigInt's right shift rounds toward negative infinity.
        mant >> (-shift) as u64
    }
}

/// `x * 2^FRAC_BITS`, rounded toward positive infinity.
pub fn fixed_ceil(x: f64) -> BigInt {
    -fixed_floor(-x)
}

fn decompose(x: f64) -> (BigInt, i64) {
    assert!(x.is_finite(), "oracle requires finite input");
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if exp_bits == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp_bits - 1075) };
    (BigInt::from(mant) * sign, exp)
}

fn atanh_series(z: &BigInt) -> BigInt {
    let z2 = (z * z) >> FRAC_BITS;
    let mut pow = z.clone();
    let mut sum = BigInt::zero();
    let mut k = 1u32;
    loop {
        let term = &pow / k;
        if term.is_zero() {
            break;
        }
        sum += term;
        pow = (pow * &z2) >> FRAC_BITS;
        k += 2;
    }
    sum
}

fn ln2() -> &'static BigInt {
    static LN2: OnceLock<BigInt> = OnceLock::new();
    LN2.get_or_init(|| {
        let third = unit() / 3u32;
        atanh_series(&third) * 2u32
    })
}

/// Logarithm of a positive fixed-point value.
pub fn ln_fixed(v: &BigInt) -> BigInt {
    assert!(v.is_positive(), "logarithm of nonpositive value");
    let k = v.bits() as i64 - 1 - FRAC_BITS as i64;
    let m = if k >= 0 { v >> k as u64 } else { v << (-k) as u64 };
    let one = unit();
    let z = ((&m - &one) << FRAC_BITS) / (&m + &one);
    atanh_series(&z) * 2u32 + ln2() * k
}

pub fn ln(x: f64) -> BigInt {
    ln_fixed(&fixed_floor(x))
}

pub fn ln_1p(x: f64) -> BigInt {
    ln_fixed(&(unit() + fixed_floor(x)))
}

pub fn exp(x: f64) -> BigInt {
    const HALVINGS: u64 = 10;
    let k = (x / std::f64::consts::LN_2).round() as i64;
    let r = fixed_floor(x) - ln2() * k;
    let r = r >> HALVINGS;
    let one = unit();
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut n = 1u32;
    loop {
        term = ((term * &r) >> FRAC_BITS) / n;
        if term.is_zero() {
            break;
        }
        sum += &term;
        n += 1;
    }
    for _ in 0..HALVINGS {
        sum = (&sum * &sum) >> FRAC_BITS;
    }
    if k >= 0 {
        sum << k as u64
    } else {
        sum >> (-k) as u64
    }
}

/// True when the fixed-point value lies inside the interval.
pub fn encloses(iv: &Interval, v: &BigInt) -> bool {
    fixed_floor(iv.lo()).cmp(v) != Ordering::Greater && fixed_ceil(iv.hi()).cmp(v) != Ordering::Less
}

/// Nearest `f64` to a fixed-point value (for diagnostics only).
pub fn to_f64(v: &BigInt) -> f64 {
    let bits = v.bits() as i64;
    let shift = (bits - 60).max(0);
    let top: BigInt = v >> shift as u64;
    let top = i64::try_from(&top).expect("fits after shift") as f64;
    top * 2f64.powi((shift - FRAC_BITS as i64) as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((to_f64(&ln(2.0)) - std::f64::consts::LN_2).abs() < 1e-16);
        assert!((to_f64(&exp(1.0)) - std::f64::consts::E).abs() < 1e-15);
        assert!(ln(1.0).is_zero());
        assert_eq!(exp(0.0), unit());
        assert!((to_f64(&ln_1p(-0.5)) + std::f64::consts::LN_2).abs() < 1e-16);
    }

    #[test]
    fn ln_exp_roundtrip_is_tight() {
        // ln(exp(3)) recovers 3 to far more than double precision.
        let e3 = exp(3.0);
        let back = ln_fixed(&e3);
        let err = (back - fixed_floor(3.0)).abs();
        assert!(err < (BigInt::one() << (FRAC_BITS - 170)));
    }

    #[test]
    fn floor_and_ceil_bracket() {
        let x = 1.0e-70;
        assert!(fixed_floor(x) <= fixed_ceil(x));
        assert_eq!(fixed_floor(0.75), fixed_ceil(0.75));
    }
}
