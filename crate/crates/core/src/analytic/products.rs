//! Certified evaluation of the infinite products
//!
//! * `P_{m,x}(w) = prod_{l>=1, l!=m} (1 - x w^l)^{-1}`
//! * `F_q(w)     = prod_{l>=1, j>=1} (1 - q^{1-j} w^l)^{-1}`
//!
//! and of the real constants `prod_j (1 - q^{-j})^{-j}` and `prod_j (1 - q^{-j})`.
//!
//! Every product is truncated where the discarded factors `1 - t` satisfy
//! `|t| < 1/2`, so that `|log (1 - t)^{-1}| <= 2 |t|` bounds the relative
//! effect of the tail. The retained factors are multiplied directly (no
//! logarithms) in ball arithmetic, and the reported error is the ball radius
//! plus `|value| * (exp(T) - 1)` for the tail bound `T`.

use num_bigint::BigInt;

use super::ball::{recip_int, up, ComplexBall, RealBall};
use crate::arith::PrimePower;
use crate::error::{Error, Result};

/// Extra decimal digits carried beyond the requested precision.
pub const GUARD_DIGITS: u32 = 10;

/// Bits needed to carry `digits` decimal digits through `factors` operations.
pub fn working_bits(digits: u32, factors: usize) -> u32 {
    let d = digits as f64 + GUARD_DIGITS as f64 + (factors.max(1) as f64).log10().ceil();
    (d * std::f64::consts::LOG2_10).ceil() as u32 + 16
}

/// A certified complex value: the true value lies within
/// `certified_abs_error` of `value`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalResult {
    pub value: ComplexBall,
    pub certified_abs_error: f64,
    pub digits: u32,
}

impl EvalResult {
    fn finish(value: ComplexBall, tail: f64, digits: u32) -> Result<Self> {
        let trunc = up(value.mid_abs_upper() * up(tail.exp_m1()));
        let err = up(value.rad + trunc);
        let requested = 10f64.powi(-(digits as i32)) * value.mid_abs_lower();
        if err > requested {
            return Err(Error::InsufficientPrecision {
                achieved: err,
                requested,
            });
        }
        let value = ComplexBall { rad: err, ..value };
        Ok(EvalResult {
            value,
            certified_abs_error: err,
            digits,
        })
    }

    pub fn real_ball(&self) -> RealBall {
        self.value.real_part()
    }
}

fn pole_threshold(digits: u32) -> f64 {
    10f64.powf(-(digits as f64) / 2.0)
}

fn tail_target(digits: u32) -> f64 {
    10f64.powi(-((digits + GUARD_DIGITS) as i32))
}

fn check_disk(w: &ComplexBall) -> Result<f64> {
    let wabs = w.abs_upper();
    if wabs >= 1.0 {
        return Err(Error::OutsideUnitDisk(wabs));
    }
    Ok(wabs)
}

/// Smallest `L >= min_len` with `c * wabs^{L+1} <= target`.
fn geometric_cutoff(c: f64, wabs: f64, target: f64, min_len: u64) -> u64 {
    if wabs == 0.0 || c <= target {
        return min_len;
    }
    let need = ((target / c).ln() / wabs.ln()).ceil() - 1.0;
    (need.max(0.0) as u64).max(min_len)
}

/// Multiplies `acc` by the factor `1 - t`, refusing factors too close to zero.
fn push_factor(
    acc: &ComplexBall,
    t: &ComplexBall,
    exponent: u64,
    threshold: f64,
    prec: u32,
) -> Result<ComplexBall> {
    let f = t.one_minus();
    if f.abs_lower() < threshold {
        return Err(Error::PoleProximity {
            exponent,
            distance: f.mid_abs_upper(),
            threshold,
        });
    }
    Ok(acc.mul(&f, prec))
}

/// `P_{m,x}(w) = prod_{l>=1, l!=m} (1 - x w^l)^{-1}`; `m = 0` keeps every factor.
pub fn eval_p(m: u64, x: &RealBall, w: &ComplexBall, digits: u32) -> Result<EvalResult> {
    let wabs = check_disk(w)?;
    if w.is_exact_zero() {
        return EvalResult::finish(ComplexBall::one(), 0.0, digits);
    }
    let xabs = x.abs_upper();
    let target = tail_target(digits);
    // log-tail: 2 x sum_{l>L} |w|^l = 2 x |w|^{L+1} / (1 - |w|)
    let coeff = 2.0 * xabs / (1.0 - wabs);
    let len = geometric_cutoff(coeff, wabs, target, m.max(1));
    let tail = coeff * wabs.powf(len as f64 + 1.0);
    let prec = working_bits(digits, len as usize) + conditioning_bits(m, xabs, w, len);
    let threshold = pole_threshold(digits);

    let mut acc = ComplexBall::one();
    let mut power = w.clone();
    for l in 1..=len {
        if l != m {
            acc = push_factor(&acc, &power.mul_real(x, prec), l, threshold, prec)?;
        }
        if l < len {
            power = power.mul(w, prec);
        }
    }
    let value = acc.recip(prec).ok_or(Error::PoleProximity {
        exponent: 0,
        distance: 0.0,
        threshold,
    })?;
    EvalResult::finish(value, tail, digits)
}

/// Extra bits that compensate for small factors `1 - x w^l`, which amplify
/// relative rounding error when the product is inverted.
fn conditioning_bits(m: u64, xabs: f64, w: &ComplexBall, len: u64) -> u32 {
    let (wr, wi) = w.to_f64_pair();
    let (mut pr, mut pi) = (wr, wi);
    let mut bits = 0.0;
    for l in 1..=len.min(4096) {
        if l != m {
            let (fr, fi) = (1.0 - xabs * pr, -xabs * pi);
            let mag = fr.hypot(fi);
            if mag < 1.0 && mag > 0.0 {
                bits -= mag.log2();
            }
        }
        let npr = pr * wr - pi * wi;
        pi = pr * wi + pi * wr;
        pr = npr;
        if xabs * pr.hypot(pi) < 1e-3 {
            break;
        }
    }
    bits.ceil() as u32 + 4
}

/// `F_q(w) = prod_{l>=1, j>=1} (1 - q^{1-j} w^l)^{-1}`.
pub fn eval_f(q: &PrimePower, w: &ComplexBall, digits: u32) -> Result<EvalResult> {
    let wabs = check_disk(w)?;
    if w.is_exact_zero() {
        return EvalResult::finish(ComplexBall::one(), 0.0, digits);
    }
    let qf = q.q_f64();
    let target = tail_target(digits);
    let geo_j = qf / (qf - 1.0); // sum_{j>=1} q^{1-j}

    // Outer cut: 2 * geo_j * |w|^{L+1} / (1 - |w|) <= target / 2.
    let outer_coeff = 2.0 * geo_j / (1.0 - wabs);
    let len = geometric_cutoff(outer_coeff, wabs, target / 2.0, 1);
    let mut tail = outer_coeff * wabs.powf(len as f64 + 1.0);
    // Inner cut for each l: 2 |w|^l q^{1-J} / (q - 1) <= target / (2 L).
    let per_l = target / (2.0 * len as f64);
    let inner: Vec<u64> = (1..=len)
        .map(|l| {
            let a = wabs.powf(l as f64);
            let c = 2.0 * a * qf / (qf - 1.0); // tail after J is c q^{-J}
            let j = if c <= per_l {
                0
            } else {
                ((c / per_l).ln() / qf.ln()).ceil().max(1.0) as u64
            };
            tail += c * qf.powf(-(j as f64));
            j
        })
        .collect();
    let count: u64 = inner.iter().sum();
    let prec = working_bits(digits, count as usize) + conditioning_bits(u64::MAX, 1.0, w, len);
    let threshold = pole_threshold(digits);
    let inv_q = recip_int(q.q(), prec);

    let mut acc = ComplexBall::one();
    let mut power = w.clone();
    for (idx, &j_max) in inner.iter().enumerate() {
        let l = idx as u64 + 1;
        let mut t = power.clone();
        for j in 1..=j_max {
            acc = push_factor(&acc, &t, l, threshold, prec)?;
            if j < j_max {
                t = t.mul_real(&inv_q, prec);
            }
        }
        if l < len {
            power = power.mul(w, prec);
        }
    }
    let value = acc.recip(prec).ok_or(Error::PoleProximity {
        exponent: 0,
        distance: 0.0,
        threshold,
    })?;
    EvalResult::finish(value, tail, digits)
}

/// Shared driver for `prod_{j>=1} (1 - q^{-j})^{e(j)}` with `e(j) = sign * (j * slope + offset)`.
fn real_q_product(
    q: &PrimePower,
    digits: u32,
    exponent: impl Fn(u64) -> u32,
    invert: bool,
    tail_after: impl Fn(u64) -> f64,
) -> Result<RealBall> {
    let target = tail_target(digits);
    let mut len = 1u64;
    while 2.0 * tail_after(len) > target {
        len += 1;
    }
    let tail = 2.0 * tail_after(len);
    let total: u64 = (1..=len).map(|j| exponent(j) as u64).sum();
    let prec = working_bits(digits, total as usize);
    let mut acc = RealBall::one();
    for j in 1..=len {
        let qj = BigInt::from(q.pow(j));
        let factor = RealBall::from_ratio(&(&qj - 1u32), &qj, prec);
        acc = acc.mul(&factor.powi(exponent(j), prec), prec);
    }
    let value = if invert { acc.recip(prec)? } else { acc };
    let res = EvalResult::finish(ComplexBall::from_real(&value), tail, digits)?;
    Ok(res.real_ball())
}

/// `sum_{j>L} j x^j` for `0 < x < 1`.
fn weighted_geometric_tail(x: f64, len: u64) -> f64 {
    let l = len as f64;
    x.powf(l + 1.0) * ((l + 1.0) - l * x) / ((1.0 - x) * (1.0 - x))
}

/// `prod_{j>=1} (1 - q^{-j})^{-j}`, the limit of `Q_q(n) / q^{n^2 + n}`.
pub fn plane_constant(q: &PrimePower, digits: u32) -> Result<RealBall> {
    let x = 1.0 / q.q_f64();
    real_q_product(
        q,
        digits,
        |j| j as u32,
        true,
        |len| weighted_geometric_tail(x, len),
    )
}

/// `prod_{j>=1} (1 - q^{-j})`, the limit of `f_q(n)`.
pub fn euler_f_infinity(q: &PrimePower, digits: u32) -> Result<RealBall> {
    let qf = q.q_f64();
    real_q_product(
        q,
        digits,
        |_| 1,
        false,
        |len| qf.powf(-(len as f64)) / (qf - 1.0),
    )
}

/// `prod_{j>=1} (1 - q^{-j})^{-(j+1)}`, evaluated directly.
pub fn shifted_plane_constant(q: &PrimePower, digits: u32) -> Result<RealBall> {
    let x = 1.0 / q.q_f64();
    real_q_product(
        q,
        digits,
        |j| j as u32 + 1,
        true,
        |len| weighted_geometric_tail(x, len) + x.powf(len as f64) / (1.0 / x - 1.0),
    )
}
