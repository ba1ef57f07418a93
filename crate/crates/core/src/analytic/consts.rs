//! Certified constants: `pi`, roots of unity, `zeta(2)` and `zeta(3)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ball::{up, ComplexBall, RealBall};
use super::bigfloat::{ldexp, BigFloat};

/// `floor(2^k * arctan(1/x))` up to the returned error (in units of `2^-k`).
fn arctan_recip_fixed(x: u32, k: u64) -> (BigInt, u64) {
    let x2 = BigInt::from(x) * x;
    // power_j = floor(2^k / x^{2j+1}); nested floors equal the exact floor.
    let mut power = (BigInt::one() << k) / x;
    let mut sum = BigInt::zero();
    let mut j = 0u64;
    while !power.is_zero() {
        let term = &power / (2 * j + 1);
        if j.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        j += 1;
    }
    // One unit per truncated term plus the first omitted term (< 1 unit).
    (sum, j + 1)
}

/// `pi` via Machin's formula `pi = 16 arctan(1/5) - 4 arctan(1/239)`.
pub fn pi(prec: u32) -> RealBall {
    let k = prec as u64 + 24;
    let (a, ea) = arctan_recip_fixed(5, k);
    let (b, eb) = arctan_recip_fixed(239, k);
    let mid = BigFloat::from_int(a * 16 - b * 4).mul_pow2(-(k as i64));
    let rad = ldexp((16 * ea + 4 * eb) as f64, -(k as i64));
    let (mid, err) = mid.round(prec);
    RealBall {
        mid,
        rad: up(rad + err),
    }
}

/// `exp(2 pi i k / m)`. Values at multiples of a quarter turn are exact.
pub fn unit_root(m: u32, k: i64, prec: u32) -> ComplexBall {
    assert!(m >= 1);
    let m64 = m as i64;
    let k = k.rem_euclid(m64);
    if (4 * k) % m64 == 0 {
        let (re, im) = match 4 * k / m64 {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        };
        return ComplexBall::exact(BigFloat::from_i64(re), BigFloat::from_i64(im));
    }
    // Reduce the angle to (-pi, pi].
    let k = if 2 * k > m64 { k - m64 } else { k };
    let wp = prec + 8;
    let theta = pi(wp)
        .mul(&RealBall::from_int(2 * k), wp)
        .div_int(m as u64, wp);
    ComplexBall::exp_i(&theta, prec)
}

fn central_binomial(k: u64) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * (2 * k - i) / (i + 1);
    }
    c
}

/// `zeta(3) = 5/2 sum_{k>=1} (-1)^{k+1} / (k^3 C(2k, k))`.
pub fn zeta3(prec: u32) -> RealBall {
    let wp = prec + 16;
    let mut sum = RealBall::zero();
    let mut k = 1u64;
    loop {
        let den = BigInt::from(k).pow(3) * central_binomial(k);
        let term = RealBall::from_ratio(&BigInt::one(), &den, wp);
        sum = if k % 2 == 1 {
            sum.add(&term, wp)
        } else {
            sum.sub(&term, wp)
        };
        if term.abs_upper() < ldexp(1.0, -(wp as i64) - 8) {
            // Alternating with decreasing terms: the tail is below the next term.
            sum.rad = up(sum.rad + term.abs_upper());
            break;
        }
        k += 1;
    }
    sum.mul(&RealBall::from_int(5), wp)
        .mul_pow2(-1)
        .add(&RealBall::zero(), prec)
}

/// `zeta(2) = 3 sum_{k>=1} 1 / (k^2 C(2k, k))`.
pub fn zeta2(prec: u32) -> RealBall {
    let wp = prec + 16;
    let mut sum = RealBall::zero();
    let mut k = 1u64;
    loop {
        let den = BigInt::from(k).pow(2) * central_binomial(k);
        let term = RealBall::from_ratio(&BigInt::one(), &den, wp);
        sum = sum.add(&term, wp);
        if term.abs_upper() < ldexp(1.0, -(wp as i64) - 8) {
            // Consecutive term ratio is below 1/4, so the tail is below |term| / 3.
            sum.rad = up(sum.rad + term.abs_upper());
            break;
        }
        k += 1;
    }
    sum.mul(&RealBall::from_int(3), wp)
        .add(&RealBall::zero(), prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        let p = pi(200);
        assert_eq!(
            p.mid.to_decimal(50),
            "3.1415926535897932384626433832795028841971693993751"
        );
        assert!(p.rad < 1e-58);
    }

    #[test]
    fn unit_roots_exact_and_periodic() {
        assert_eq!(unit_root(4, 1, 64), ComplexBall::i());
        assert_eq!(unit_root(2, 3, 64).re, BigFloat::from_i64(-1));
        assert_eq!(unit_root(8, 6, 64).im, BigFloat::from_i64(-1));
        let z = unit_root(3, 1, 100);
        let z4 = unit_root(3, 4, 100);
        let z_neg = unit_root(3, -2, 100);
        assert_eq!(z, z4);
        assert_eq!(z, z_neg);
        let cube = z.powi(3, 100);
        assert!((cube.re.to_f64() - 1.0).abs() <= cube.rad + 1e-29);
        assert!(cube.im.to_f64().abs() <= cube.rad + 1e-29);
    }

    /// Independent oracle: direct partial sums with Euler-Maclaurin tails.
    #[test]
    fn zeta_values() {
        let z3 = zeta3(120);
        let z2 = zeta2(120);
        let n = 20_000u32;
        let direct3: f64 = (1..=n).rev().map(|k| 1.0 / (k as f64).powi(3)).sum::<f64>()
            + 1.0 / (2.0 * (n as f64).powi(2))
            - 1.0 / (2.0 * (n as f64).powi(3));
        let direct2: f64 = (1..=n).rev().map(|k| 1.0 / (k as f64).powi(2)).sum::<f64>()
            + 1.0 / n as f64
            - 1.0 / (2.0 * (n as f64).powi(2));
        assert!((z3.to_f64() - direct3).abs() < 1e-14);
        assert!((z2.to_f64() - direct2).abs() < 1e-13);
        assert_eq!(z3.mid.to_decimal(30), "1.20205690315959428539973816151");
        let pi2_6 = pi(120).powi(2, 120).div_int(6, 120);
        assert!((z2.mid.sub(&pi2_6.mid)).abs_upper() <= z2.rad + pi2_6.rad);
    }
}
