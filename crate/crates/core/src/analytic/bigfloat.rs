use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Binary floating-point number `mant * 2^exp` with an arbitrary-size mantissa.
///
/// Addition, subtraction and multiplication are exact; precision is lost only
/// in [`BigFloat::round`] and [`BigFloat::div`], which truncate toward zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
}

/// `x * 2^e` without intermediate overflow.
pub(crate) fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_int(BigInt::one())
    }

    pub fn from_int(n: BigInt) -> Self {
        BigFloat { mant: n, exp: 0 }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_int(BigInt::from(n))
    }

    /// Exact conversion; every finite `f64` is dyadic.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Self::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & ((1u64 << 52) - 1)) as i64;
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1i64 << 52), raw_exp - 1075)
        };
        Some(BigFloat {
            mant: BigInt::from(sign * m),
            exp: e,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    /// `floor(log2 |x|)`, or `None` for zero.
    pub fn log2_floor(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 - 1 + self.exp)
        }
    }

    /// Truncates toward zero to at most `prec` mantissa bits; returns the result
    /// and an upper bound on the discarded magnitude.
    pub fn round(&self, prec: u32) -> (BigFloat, f64) {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return (self.clone(), 0.0);
        }
        let shift = bits - prec as u64;
        let mag = self.mant.magnitude() >> shift;
        let mant = BigInt::from_biguint(self.mant.sign(), mag);
        let exp = self.exp + shift as i64;
        (BigFloat { mant, exp }, ldexp(1.0, exp))
    }

    pub fn rounded(&self, prec: u32) -> BigFloat {
        self.round(prec).0
    }

    pub fn neg(&self) -> BigFloat {
        BigFloat {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> BigFloat {
        BigFloat {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn add(&self, other: &BigFloat) -> BigFloat {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let exp = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - exp) as u64;
        let b = &other.mant << (other.exp - exp) as u64;
        BigFloat { mant: a + b, exp }
    }

    pub fn sub(&self, other: &BigFloat) -> BigFloat {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &BigFloat) -> BigFloat {
        BigFloat {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
    }

    /// `self * 2^k`, exact.
    pub fn mul_pow2(&self, k: i64) -> BigFloat {
        BigFloat {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Quotient truncated toward zero to `prec` bits. Returns the quotient and
    /// an upper bound on its absolute error. Panics on division by zero.
    pub fn div(&self, other: &BigFloat, prec: u32) -> (BigFloat, f64) {
        assert!(!other.is_zero(), "BigFloat division by zero");
        if self.is_zero() {
            return (BigFloat::zero(), 0.0);
        }
        let shift = prec as i64 + 2 + other.mant.bits() as i64 - self.mant.bits() as i64;
        let shift = shift.max(0);
        let num = &self.mant << shift as u64;
        let q = &num / &other.mant;
        let exp = self.exp - other.exp - shift;
        // Truncation of the integer quotient loses less than one unit of 2^exp.
        let raw = BigFloat { mant: q, exp };
        let (out, e) = raw.round(prec);
        (out, e + ldexp(1.0, exp))
    }

    /// `num / den` truncated to `prec` bits, with an error bound.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> (BigFloat, f64) {
        BigFloat::from_int(num.clone()).div(&BigFloat::from_int(den.clone()), prec)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let (m, e) = if bits > 64 {
            let shift = bits - 64;
            (
                (&self.mant >> shift).to_f64().unwrap_or(0.0),
                self.exp + shift as i64,
            )
        } else {
            (self.mant.to_f64().unwrap_or(0.0), self.exp)
        };
        ldexp(m, e)
    }

    /// An upper bound on `|self|` as `f64`.
    pub fn abs_upper(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let v = self.to_f64().abs() * (1.0 + 1e-14);
        if v == 0.0 {
            f64::MIN_POSITIVE
        } else {
            v
        }
    }

    /// A lower bound on `|self|` as `f64`.
    pub fn abs_lower(&self) -> f64 {
        self.to_f64().abs() * (1.0 - 1e-14)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// `round(|self| * 10^k)` as an integer, half away from zero.
    fn scaled_magnitude(&self, k: i64) -> BigInt {
        let mut num = self.mant.abs();
        let mut den = BigInt::one();
        if k >= 0 {
            num *= num_traits::pow(BigInt::from(10u32), k as usize);
        } else {
            den *= num_traits::pow(BigInt::from(10u32), (-k) as usize);
        }
        if self.exp >= 0 {
            num <<= self.exp as u64;
        } else {
            den <<= (-self.exp) as u64;
        }
        let (q, r) = num.div_rem(&den);
        if (r << 1u32) >= den {
            q + 1
        } else {
            q
        }
    }

    /// Decimal rendering with `sig` significant digits (rounded half away from
    /// zero). Plain notation is used for decimal exponents in `[-6, 21)`.
    pub fn to_decimal(&self, sig: u32) -> String {
        let sig = sig.max(1) as i64;
        if self.is_zero() {
            return if sig > 1 {
                format!("0.{}", "0".repeat(sig as usize - 1))
            } else {
                "0".to_string()
            };
        }
        let approx = self.to_f64().abs();
        let mut e10 = if approx.is_finite() && approx > 0.0 {
            approx.log10().floor() as i64
        } else {
            // Outside the f64 range; estimate from the binary exponent.
            ((self.log2_floor().unwrap_or(0) as f64) * std::f64::consts::LOG10_2).floor() as i64
        };
        let digits = loop {
            let d = self.scaled_magnitude(sig - 1 - e10).to_string();
            match (d.len() as i64).cmp(&sig) {
                Ordering::Greater => e10 += 1,
                Ordering::Less => e10 -= 1,
                Ordering::Equal => break d,
            }
        };
        let sign = if self.is_negative() { "-" } else { "" };
        if (-6..21).contains(&e10) {
            let point = e10 + 1;
            let body = if point <= 0 {
                format!("0.{}{}", "0".repeat((-point) as usize), digits)
            } else if point >= sig {
                format!("{}{}", digits, "0".repeat((point - sig) as usize))
            } else {
                format!(
                    "{}.{}",
                    &digits[..point as usize],
                    &digits[point as usize..]
                )
            };
            format!("{sign}{body}")
        } else {
            let mantissa = if digits.len() > 1 {
                format!("{}.{}", &digits[..1], &digits[1..])
            } else {
                digits
            };
            format!("{sign}{mantissa}e{e10}")
        }
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(f.precision().unwrap_or(20) as u32))
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let d = self.sub(other);
        Some(match d.mant.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn decimal_rendering() {
        let x = BigFloat::from_f64(0.125).unwrap();
        assert_eq!(x.to_decimal(3), "0.125");
        assert_eq!(BigFloat::from_i64(-1234).to_decimal(6), "-1234.00");
        assert_eq!(BigFloat::from_i64(1234).to_decimal(2), "1200");
        assert_eq!(BigFloat::from_i64(999).to_decimal(2), "1000");
        assert_eq!(BigFloat::zero().to_decimal(3), "0.00");
        let tiny = BigFloat::one().mul_pow2(-40);
        assert_eq!(tiny.to_decimal(4), "9.095e-13");
        let (third, _) = BigFloat::one().div(&BigFloat::from_i64(3), 100);
        assert_eq!(third.to_decimal(25), "0.3333333333333333333333333");
    }

    #[test]
    fn division_error_bound_holds() {
        let (q, err) = BigFloat::from_i64(2).div(&BigFloat::from_i64(7), 64);
        let exact = BigRational::new(2.into(), 7.into());
        let diff = (q.to_rational() - exact).abs();
        assert!(diff.to_f64().unwrap() <= err);
        assert!(err < 1e-18);
    }

    proptest! {
        #[test]
        fn round_error_is_bounded(m in any::<i64>(), e in -100i64..100, prec in 1u32..40) {
            let x = BigFloat { mant: BigInt::from(m), exp: e };
            let (r, err) = x.round(prec);
            let diff = (x.to_rational() - r.to_rational()).abs();
            prop_assert!(diff.to_f64().unwrap() <= err);
            prop_assert!(r.mant.bits() <= prec as u64);
            prop_assert!(r.abs().to_rational() <= x.abs().to_rational());
        }

        #[test]
        fn f64_round_trip(x in -1e300f64..1e300) {
            let b = BigFloat::from_f64(x).unwrap();
            prop_assert_eq!(b.to_f64(), x);
            prop_assert!(b.abs_upper() >= x.abs() && b.abs_lower() <= x.abs());
        }
    }
}
