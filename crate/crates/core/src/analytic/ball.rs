use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::bigfloat::{ldexp, BigFloat};
use crate::error::{Error, Result};

/// Inflates an `f64` error term so that it stays an upper bound after the
/// floating-point rounding of the expression that produced it.
#[inline]
pub(crate) fn up(x: f64) -> f64 {
    x * (1.0 + 1e-14) + f64::MIN_POSITIVE
}

/// A real number known to lie within `rad` of `mid`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealBall {
    pub mid: BigFloat,
    pub rad: f64,
}

impl RealBall {
    pub fn exact(mid: BigFloat) -> Self {
        RealBall { mid, rad: 0.0 }
    }

    pub fn zero() -> Self {
        Self::exact(BigFloat::zero())
    }

    pub fn one() -> Self {
        Self::exact(BigFloat::one())
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::exact(BigFloat::from_int(n.into()))
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        let (mid, rad) = BigFloat::from_ratio(num, den, prec);
        RealBall { mid, rad }
    }

    pub fn abs_upper(&self) -> f64 {
        up(self.mid.abs_upper() + self.rad)
    }

    pub fn abs_lower(&self) -> f64 {
        (self.mid.abs_lower() - up(self.rad)).max(0.0)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn contains_zero(&self) -> bool {
        self.abs_lower() == 0.0
    }

    fn rounded(mid: BigFloat, rad: f64, prec: u32) -> Self {
        let (mid, err) = mid.round(prec);
        RealBall {
            mid,
            rad: up(rad + err),
        }
    }

    pub fn neg(&self) -> Self {
        RealBall {
            mid: self.mid.neg(),
            rad: self.rad,
        }
    }

    pub fn add(&self, o: &RealBall, prec: u32) -> Self {
        Self::rounded(self.mid.add(&o.mid), up(self.rad + o.rad), prec)
    }

    pub fn sub(&self, o: &RealBall, prec: u32) -> Self {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &RealBall, prec: u32) -> Self {
        let rad = up(self.mid.abs_upper() * o.rad)
            + up(o.mid.abs_upper() * self.rad)
            + up(self.rad * o.rad);
        Self::rounded(self.mid.mul(&o.mid), up(rad), prec)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        RealBall {
            mid: self.mid.mul_pow2(k),
            rad: ldexp(self.rad, k),
        }
    }

    /// `1 / self`; fails if the ball contains zero.
    pub fn recip(&self, prec: u32) -> Result<Self> {
        let lo = self.abs_lower();
        if lo == 0.0 {
            return Err(Error::PoleProximity {
                exponent: 0,
                distance: lo,
                threshold: self.rad,
            });
        }
        let (mid, err) = BigFloat::one().div(&self.mid, prec);
        // |1/x - 1/m| <= r / (|m| (|m| - r))
        let prop = up(self.rad / (self.mid.abs_lower() * lo));
        Ok(RealBall {
            mid,
            rad: up(err + prop),
        })
    }

    pub fn div(&self, o: &RealBall, prec: u32) -> Result<Self> {
        Ok(self.mul(&o.recip(prec)?, prec))
    }

    pub fn div_int(&self, k: u64, prec: u32) -> Self {
        let (mid, err) = self.mid.div(&BigFloat::from_int(BigInt::from(k)), prec);
        RealBall {
            mid,
            rad: up(self.rad / k as f64 + err),
        }
    }

    pub fn powi(&self, mut e: u32, prec: u32) -> Self {
        let mut acc = RealBall::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, prec);
            }
        }
        acc
    }

    /// `exp(self)` by argument halving, Taylor series and repeated squaring.
    pub fn exp(&self, prec: u32) -> Self {
        let wp = prec + 16;
        let s = match self.mid.log2_floor() {
            Some(l) if l >= -1 => (l + 2) as u32,
            _ => 0,
        };
        let y = RealBall::exact(self.mid.mul_pow2(-(s as i64)));
        let mut sum = RealBall::one();
        let mut term = RealBall::one();
        let mut k = 1u64;
        loop {
            term = term.mul(&y, wp).div_int(k, wp);
            sum = sum.add(&term, wp);
            // |y| <= 1/2, so the remaining terms are bounded by |term|.
            if term.abs_upper() < ldexp(1.0, -(wp as i64) - 4) {
                sum.rad = up(sum.rad + term.abs_upper());
                break;
            }
            k += 1;
        }
        for _ in 0..s {
            sum = sum.mul(&sum, wp);
        }
        if self.rad > 0.0 {
            sum.rad = up(sum.rad + sum.abs_upper() * up(self.rad.exp_m1()));
        }
        Self::rounded(sum.mid, sum.rad, prec)
    }

    /// `(num / den)^{1/m}` from an exact integer `m`-th root.
    pub fn root_of_ratio(num: &BigUint, den: &BigUint, m: u32, prec: u32) -> Self {
        assert!(m >= 1 && !den.is_zero());
        if num.is_zero() {
            return RealBall::zero();
        }
        // Aim for about prec + 8 significant bits: scale by 2^{m K}.
        let est = (num.bits() as i64 - den.bits() as i64) / m as i64;
        let k = prec as i64 + 8 - est;
        let (scaled_num, scaled_den) = if k >= 0 {
            (num << (m as u64 * k as u64), den.clone())
        } else {
            (num.clone(), den << (m as u64 * (-k) as u64))
        };
        let n = scaled_num / scaled_den;
        // y <= true root < y + 2 (in units of 2^{-k}).
        let y = n.nth_root(m);
        let mid = BigFloat::from_int(BigInt::from(y + 1u32)).mul_pow2(-k);
        Self::rounded(mid, ldexp(1.0, -k), prec)
    }
}

/// A complex number known to lie within `rad` (in modulus) of `re + i im`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexBall {
    pub re: BigFloat,
    pub im: BigFloat,
    pub rad: f64,
}

impl ComplexBall {
    pub fn exact(re: BigFloat, im: BigFloat) -> Self {
        ComplexBall { re, im, rad: 0.0 }
    }

    pub fn zero() -> Self {
        Self::exact(BigFloat::zero(), BigFloat::zero())
    }

    pub fn one() -> Self {
        Self::exact(BigFloat::one(), BigFloat::zero())
    }

    pub fn i() -> Self {
        Self::exact(BigFloat::zero(), BigFloat::one())
    }

    pub fn from_real(x: &RealBall) -> Self {
        ComplexBall {
            re: x.mid.clone(),
            im: BigFloat::zero(),
            rad: x.rad,
        }
    }

    pub fn real_part(&self) -> RealBall {
        RealBall {
            mid: self.re.clone(),
            rad: self.rad,
        }
    }

    pub fn imag_part(&self) -> RealBall {
        RealBall {
            mid: self.im.clone(),
            rad: self.rad,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero() && self.rad == 0.0
    }

    pub fn mid_abs_upper(&self) -> f64 {
        up(self.re.abs_upper().hypot(self.im.abs_upper()))
    }

    pub fn mid_abs_lower(&self) -> f64 {
        self.re.abs_lower().hypot(self.im.abs_lower()) * (1.0 - 1e-14)
    }

    pub fn abs_upper(&self) -> f64 {
        up(self.mid_abs_upper() + self.rad)
    }

    pub fn abs_lower(&self) -> f64 {
        (self.mid_abs_lower() - up(self.rad)).max(0.0)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    fn rounded(re: BigFloat, im: BigFloat, rad: f64, prec: u32) -> Self {
        let (re, e1) = re.round(prec);
        let (im, e2) = im.round(prec);
        ComplexBall {
            re,
            im,
            rad: up(rad + e1 + e2),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexBall {
            re: self.re.clone(),
            im: self.im.neg(),
            rad: self.rad,
        }
    }

    pub fn neg(&self) -> Self {
        ComplexBall {
            re: self.re.neg(),
            im: self.im.neg(),
            rad: self.rad,
        }
    }

    pub fn add(&self, o: &ComplexBall, prec: u32) -> Self {
        Self::rounded(
            self.re.add(&o.re),
            self.im.add(&o.im),
            up(self.rad + o.rad),
            prec,
        )
    }

    pub fn sub(&self, o: &ComplexBall, prec: u32) -> Self {
        self.add(&o.neg(), prec)
    }

    /// `1 - self`, exact apart from the inherited radius.
    pub fn one_minus(&self) -> Self {
        ComplexBall {
            re: BigFloat::one().sub(&self.re),
            im: self.im.neg(),
            rad: self.rad,
        }
    }

    pub fn mul(&self, o: &ComplexBall, prec: u32) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        let rad = up(self.mid_abs_upper() * o.rad)
            + up(o.mid_abs_upper() * self.rad)
            + up(self.rad * o.rad);
        Self::rounded(re, im, up(rad), prec)
    }

    pub fn mul_real(&self, x: &RealBall, prec: u32) -> Self {
        let rad = up(x.mid.abs_upper() * self.rad)
            + up(self.mid_abs_upper() * x.rad)
            + up(self.rad * x.rad);
        Self::rounded(self.re.mul(&x.mid), self.im.mul(&x.mid), up(rad), prec)
    }

    /// Multiplication by `i`, exact.
    pub fn mul_i(&self) -> Self {
        ComplexBall {
            re: self.im.neg(),
            im: self.re.clone(),
            rad: self.rad,
        }
    }

    pub fn div_int(&self, k: u64, prec: u32) -> Self {
        let d = BigFloat::from_int(BigInt::from(k));
        let (re, e1) = self.re.div(&d, prec);
        let (im, e2) = self.im.div(&d, prec);
        ComplexBall {
            re,
            im,
            rad: up(self.rad / k as f64 + e1 + e2),
        }
    }

    /// `1 / self`; `None` if the ball contains zero.
    pub fn recip(&self, prec: u32) -> Option<Self> {
        let lo = self.abs_lower();
        if lo == 0.0 {
            return None;
        }
        let norm = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let (re, e1) = self.re.div(&norm, prec);
        let (im, e2) = self.im.neg().div(&norm, prec);
        let prop = up(self.rad / (self.mid_abs_lower() * lo));
        Some(ComplexBall {
            re,
            im,
            rad: up(e1 + e2 + prop),
        })
    }

    pub fn powi(&self, mut e: u64, prec: u32) -> Self {
        let mut acc = ComplexBall::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, prec);
            }
        }
        acc
    }

    /// `exp(i theta)` by its Taylor series; intended for `|theta| <= 4`.
    pub fn exp_i(theta: &RealBall, prec: u32) -> Self {
        let wp = prec + 16;
        let z = ComplexBall::from_real(theta).mul_i();
        let bound = theta.abs_upper();
        let mut sum = ComplexBall::one();
        let mut term = ComplexBall::one();
        let mut k = 1u64;
        loop {
            term = term.mul(&z, wp).div_int(k, wp);
            sum = sum.add(&term, wp);
            // Once |theta| / (k + 1) <= 1/2 the tail is at most |term|.
            if 2.0 * bound <= (k + 1) as f64 && term.abs_upper() < ldexp(1.0, -(wp as i64) - 4) {
                sum.rad = up(sum.rad + term.abs_upper());
                break;
            }
            k += 1;
        }
        Self::rounded(sum.re, sum.im, sum.rad, prec)
    }
}

impl From<RealBall> for ComplexBall {
    fn from(x: RealBall) -> Self {
        ComplexBall {
            re: x.mid,
            im: BigFloat::zero(),
            rad: x.rad,
        }
    }
}

/// `1 / q` style helper: exact reciprocal ball of a positive integer.
pub(crate) fn recip_int(n: &BigUint, prec: u32) -> RealBall {
    RealBall::from_ratio(&BigInt::one(), &BigInt::from(n.clone()), prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::{Signed, ToPrimitive};

    fn contains(b: &RealBall, exact: &BigRational) -> bool {
        (b.mid.to_rational() - exact).abs().to_f64().unwrap() <= b.rad
    }

    #[test]
    fn recip_contains_exact() {
        let x = RealBall::from_int(7);
        let r = x.recip(80).unwrap();
        assert!(contains(&r, &BigRational::new(1.into(), 7.into())));
        assert!(r.rad < 1e-23);
        assert!(RealBall::zero().recip(80).is_err());
    }

    #[test]
    fn roots_bracket_truth() {
        // 2^{-1/3}: cube the ball and compare with 1/2.
        let r = RealBall::root_of_ratio(&BigUint::one(), &BigUint::from(2u32), 3, 120);
        let c = r.powi(3, 120);
        assert!(contains(&c, &BigRational::new(1.into(), 2.into())));
        assert!(r.rad < 1e-34);
        let r = RealBall::root_of_ratio(&BigUint::from(1u64 << 40), &BigUint::one(), 7, 100);
        assert!((r.to_f64() - 2f64.powf(40.0 / 7.0)).abs() < 1e-12);
        let c = r.powi(7, 100);
        assert!(contains(
            &c,
            &BigRational::from_integer((1u64 << 40).into())
        ));
    }

    #[test]
    fn exp_matches_f64() {
        for x in [-3.5f64, -0.1, 0.0, 0.7, 4.848, 47.5] {
            let e = RealBall::exact(BigFloat::from_f64(x).unwrap()).exp(100);
            assert!((e.to_f64() / x.exp() - 1.0).abs() < 1e-14, "x = {x}");
            assert!(e.rad < e.abs_upper() * 1e-25);
        }
    }

    #[test]
    fn exp_i_on_unit_circle() {
        let theta = RealBall::exact(BigFloat::from_f64(2.0).unwrap());
        let z = ComplexBall::exp_i(&theta, 120);
        let (c, s) = z.to_f64_pair();
        assert!((c - 2f64.cos()).abs() < 1e-15 && (s - 2f64.sin()).abs() < 1e-15);
        let norm = z.mul(&z.conj(), 120);
        let one = BigRational::one();
        assert!(contains(&norm.real_part(), &one));
    }

    #[test]
    fn complex_recip_contains_truth() {
        let z = ComplexBall::exact(BigFloat::from_i64(3), BigFloat::from_i64(4));
        let r = z.recip(90).unwrap();
        // 1/(3+4i) = (3-4i)/25
        assert!(contains(
            &r.real_part(),
            &BigRational::new(3.into(), 25.into())
        ));
        assert!(contains(
            &r.imag_part(),
            &BigRational::new((-4).into(), 25.into())
        ));
        assert!(ComplexBall::zero().recip(90).is_none());
    }
}
