use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

/// Size `q = p^r` of a finite field, kept together with its prime decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimePower {
    p: u64,
    r: u32,
    q: BigUint,
}

impl PrimePower {
    pub fn new(p: u64, r: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidPrimePower(format!(
                "exponent r must be >= 1, got {r}"
            )));
        }
        if !is_prime(p) {
            return Err(Error::InvalidPrimePower(format!("{p} is not prime")));
        }
        Ok(PrimePower {
            p,
            r,
            q: num_traits::pow(BigUint::from(p), r as usize),
        })
    }

    /// Decomposes `q` as `p^r`, failing unless `q` is a prime power.
    pub fn from_q(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidPrimePower(format!(
                "{q} is not a prime power"
            )));
        }
        let p = smallest_prime_factor(q);
        let mut rest = q;
        let mut r = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            r += 1;
        }
        if rest != 1 {
            return Err(Error::InvalidPrimePower(format!(
                "{q} is not a prime power"
            )));
        }
        PrimePower::new(p, r)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    pub fn q_u64(&self) -> Option<u64> {
        self.q.to_u64()
    }

    pub fn q_f64(&self) -> f64 {
        self.q.to_f64().unwrap_or(f64::INFINITY)
    }

    /// `q^e` as an exact integer.
    pub fn pow(&self, e: u64) -> BigUint {
        if e == 0 {
            return BigUint::one();
        }
        self.q.pow(e as u32)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    if is_prime(n) {
        return n;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases suffice below 2^64.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..5000u64 {
            let slow = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), slow, "n = {n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn decomposes_prime_powers() {
        let q = PrimePower::from_q(9).unwrap();
        assert_eq!((q.p(), q.r()), (3, 2));
        let q = PrimePower::from_q(8).unwrap();
        assert_eq!((q.p(), q.r()), (2, 3));
        assert_eq!(PrimePower::from_q(7).unwrap().r(), 1);
        assert!(PrimePower::from_q(6).is_err());
        assert!(PrimePower::from_q(1).is_err());
        assert!(PrimePower::new(4, 1).is_err());
        assert!(PrimePower::new(2, 0).is_err());
    }

    #[test]
    fn q_is_exact_for_large_exponents() {
        let q = PrimePower::new(3, 60).unwrap();
        assert_eq!(q.q(), &num_traits::pow(BigUint::from(3u32), 60));
        assert!(q.q_u64().is_none());
    }
}
