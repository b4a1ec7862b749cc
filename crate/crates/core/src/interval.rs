//! Dyadic interval arithmetic with outward rounding.
//!
//! An [`Interval`] at precision `p` is the closed set `[lo/2^p, hi/2^p]` with
//! integer endpoints. Every operation rounds the lower end down and the upper
//! end up, so the true value stays enclosed.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn shift_floor(x: &BigInt, bits: u32) -> BigInt {
    // `>>` on negative BigInt rounds toward -inf
    x >> bits
}

fn shift_ceil(x: &BigInt, bits: u32) -> BigInt {
    -((-x) >> bits)
}

impl Interval {
    pub fn exact_int(n: &BigInt, prec: u32) -> Self {
        let v = n << prec;
        Interval {
            lo: v.clone(),
            hi: v,
            prec,
        }
    }

    /// `[lo/2^prec, hi/2^prec]`; panics if `lo > hi`.
    pub fn from_scaled(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        assert!(lo <= hi, "inverted interval");
        Interval { lo, hi, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lo_scaled(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_scaled(&self) -> &BigInt {
        &self.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        debug_assert_eq!(self.prec, other.prec);
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            prec: self.prec,
        }
    }

    pub fn add_int(&self, n: &BigInt) -> Interval {
        let v: BigInt = n << self.prec;
        Interval {
            lo: &self.lo + &v,
            hi: &self.hi + &v,
            prec: self.prec,
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        debug_assert_eq!(self.prec, other.prec);
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let min = products.iter().min().expect("four products");
        let max = products.iter().max().expect("four products");
        Interval {
            lo: shift_floor(min, self.prec),
            hi: shift_ceil(max, self.prec),
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            Interval {
                lo: -&self.hi,
                hi: -&self.lo,
                prec: self.prec,
            }
        } else {
            Interval {
                lo: BigInt::zero(),
                hi: self.hi.clone().max(-&self.lo),
                prec: self.prec,
            }
        }
    }

    /// Enclosure of `max(a, b)`.
    pub fn max(&self, other: &Interval) -> Interval {
        debug_assert_eq!(self.prec, other.prec);
        Interval {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec,
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Compares the enclosed value with the integer `n`, if the enclosure decides it.
    pub fn cmp_int(&self, n: &BigInt) -> Option<Ordering> {
        let v: BigInt = n << self.prec;
        if self.hi < v {
            Some(Ordering::Less)
        } else if self.lo > v {
            Some(Ordering::Greater)
        } else if self.lo == v && self.hi == v {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Width `hi - lo` as a float (rounded up by one ulp-ish margin is not needed for reporting).
    pub fn width(&self) -> f64 {
        scaled_to_f64(&(&self.hi - &self.lo), self.prec)
    }

    /// A float lower bound of the interval (rounded down).
    pub fn lo_f64(&self) -> f64 {
        let v = scaled_to_f64(&self.lo, self.prec);
        v - v.abs() * 4.0 * f64::EPSILON - f64::MIN_POSITIVE
    }

    /// A float upper bound of the interval (rounded up).
    pub fn hi_f64(&self) -> f64 {
        let v = scaled_to_f64(&self.hi, self.prec);
        v + v.abs() * 4.0 * f64::EPSILON + f64::MIN_POSITIVE
    }

    pub fn mid_f64(&self) -> f64 {
        scaled_to_f64(&(&self.lo + &self.hi), self.prec + 1)
    }
}

/// `x / 2^prec` as f64 (round-to-nearest; callers widen when they need rigor).
pub fn scaled_to_f64(x: &BigInt, prec: u32) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().unwrap_or(f64::NAN) * (2f64).powi(-(prec as i32))
    } else {
        let drop = (bits - 900) as u32;
        let top: BigInt = x >> drop;
        top.to_f64().unwrap_or(f64::NAN) * (2f64).powi(drop as i32 - prec as i32)
    }
}

/// Floor of `v·2^prec` for a finite float.
pub fn f64_to_scaled_floor(v: f64, prec: u32) -> BigInt {
    scaled_from_f64(v, prec, true)
}

pub fn f64_to_scaled_ceil(v: f64, prec: u32) -> BigInt {
    scaled_from_f64(v, prec, false)
}

fn scaled_from_f64(v: f64, prec: u32, floor: bool) -> BigInt {
    assert!(v.is_finite());
    if v == 0.0 {
        return BigInt::zero();
    }
    // v = mantissa · 2^exp exactly
    let bits = v.to_bits();
    let sign: i64 = if bits >> 63 == 1 { -1 } else { 1 };
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mantissa, exp) = if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    };
    let m = BigInt::from(mantissa) * sign;
    let shift = exp + prec as i64;
    if shift >= 0 {
        m << shift as u32
    } else {
        let d = BigInt::from(1) << (-shift) as u32;
        if floor {
            m.div_floor(&d)
        } else {
            -((-m).div_floor(&d))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_is_outward() {
        let p = 20;
        let third = Interval::from_scaled(
            f64_to_scaled_floor(1.0 / 3.0, p),
            f64_to_scaled_ceil(1.0 / 3.0, p),
            p,
        );
        let three = Interval::exact_int(&BigInt::from(3), p);
        let one = third.mul(&three);
        assert_eq!(one.cmp_int(&BigInt::from(1)), None);
        assert!(one.lo_f64() <= 1.0 && one.hi_f64() >= 1.0);
    }

    #[test]
    fn abs_and_max() {
        let p = 8;
        let a = Interval::from_scaled(BigInt::from(-300), BigInt::from(-100), p);
        let b = a.abs();
        assert_eq!((b.lo_scaled(), b.hi_scaled()), (&BigInt::from(100), &BigInt::from(300)));
        let c = Interval::from_scaled(BigInt::from(-10), BigInt::from(20), p).abs();
        assert_eq!(c.lo_scaled(), &BigInt::from(0));
        assert_eq!(c.hi_scaled(), &BigInt::from(20));
    }

    #[test]
    fn float_conversion_brackets() {
        for v in [0.1, -2.5, 1e-30, 12345.678] {
            let lo = f64_to_scaled_floor(v, 64);
            let hi = f64_to_scaled_ceil(v, 64);
            assert!(lo <= hi);
            assert!(&hi - &lo <= BigInt::from(1));
        }
    }
}
