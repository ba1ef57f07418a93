//! Exact arithmetic foundations: prime powers, the finite products
//! `f_q(n) = prod_{j=1}^n (1 - q^{-j})`, general linear group orders and
//! integer partitions.

mod partitions;
mod prime_power;

pub use partitions::{partitions, Partition, Partitions};
pub use prime_power::{is_prime, PrimePower};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational carrier used by every counting formula.
pub type ExactRational = BigRational;

pub(crate) fn big(n: &BigUint) -> BigInt {
    BigInt::from(n.clone())
}

/// `q^e` for a possibly negative exponent.
pub fn q_pow(q: &PrimePower, e: i64) -> ExactRational {
    let m = big(&q.pow(e.unsigned_abs()));
    if e >= 0 {
        BigRational::from_integer(m)
    } else {
        BigRational::new(BigInt::one(), m)
    }
}

/// `f_q(n) = prod_{j=1}^{n} (1 - q^{-j})`; the empty product `f_q(0)` is 1.
pub fn f_q(q: &PrimePower, n: u32) -> ExactRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let qi = big(q.q());
    let mut qj = BigInt::one();
    for _ in 0..n {
        qj *= &qi;
        num *= &qj - 1u32;
        den *= &qj;
    }
    BigRational::new(num, den)
}

/// `f_q(0), ..., f_q(n)` in one pass.
pub fn f_q_table(q: &PrimePower, n: u32) -> Vec<ExactRational> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = BigRational::one();
    out.push(acc.clone());
    let qi = big(q.q());
    let mut qj = BigInt::one();
    for _ in 0..n {
        qj *= &qi;
        acc *= BigRational::new(&qj - 1u32, qj.clone());
        out.push(acc.clone());
    }
    out
}

/// `|GL_n(F_q)| = q^{n^2} f_q(n)`, checked to be integral.
pub fn gl_order(q: &PrimePower, n: u32) -> Result<BigUint> {
    let value = q_pow(q, (n as i64) * (n as i64)) * f_q(q, n);
    to_natural(&value, "gl_order", q, n)
}

/// Converts an exact rational that must be a non-negative integer.
pub(crate) fn to_natural(
    value: &ExactRational,
    what: &'static str,
    q: &PrimePower,
    n: u32,
) -> Result<BigUint> {
    if !value.is_integer() || value.is_negative() {
        return Err(Error::NonIntegral {
            what,
            q: q.to_string(),
            n,
            value: value.to_string(),
        });
    }
    Ok(value
        .to_integer()
        .to_biguint()
        .unwrap_or_else(BigUint::zero))
}
