//! Ground-truth enumeration over prime fields `F_p`.
//!
//! Matrices are enumerated by an index whose base-`p` digits, least significant
//! first, are the entries in row-major order. Every count is exact and refuses
//! to start when its cost (in field multiplications) exceeds the budget.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::arith::is_prime;
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

/// An `n x n` matrix over `F_p` with entries reduced into `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatrixFp {
    n: usize,
    p: u32,
    entries: Vec<u32>,
}

impl MatrixFp {
    pub fn zero(n: usize, p: u32) -> Self {
        MatrixFp {
            n,
            p,
            entries: vec![0; n * n],
        }
    }

    pub fn identity(n: usize, p: u32) -> Self {
        let mut m = Self::zero(n, p);
        for i in 0..n {
            m.entries[i * n + i] = 1 % p;
        }
        m
    }

    /// Row-major entries, reduced mod `p`.
    pub fn from_entries(n: usize, p: u32, entries: &[i64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::ShapeMismatch(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        if p < 2 {
            return Err(Error::InvalidArgument(format!("modulus {p} < 2")));
        }
        let entries = entries
            .iter()
            .map(|&e| e.rem_euclid(p as i64) as u32)
            .collect();
        Ok(MatrixFp { n, p, entries })
    }

    /// Elementary matrix with a single 1 at `(row, col)`.
    pub fn unit(n: usize, p: u32, row: usize, col: usize) -> Self {
        let mut m = Self::zero(n, p);
        m.entries[row * n + col] = 1;
        m
    }

    /// The matrix with enumeration index `index` (base-`p` digits, least significant first).
    pub fn from_index(n: usize, p: u32, mut index: u64) -> Self {
        let mut entries = vec![0; n * n];
        for e in entries.iter_mut() {
            *e = (index % p as u64) as u32;
            index /= p as u64;
        }
        MatrixFp { n, p, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.entries[row * self.n + col]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn trace(&self) -> u32 {
        let p = self.p as u64;
        ((0..self.n).map(|i| self.get(i, i) as u64).sum::<u64>() % p) as u32
    }

    /// Determinant mod `p` by Gaussian elimination.
    pub fn determinant(&self) -> u32 {
        let n = self.n;
        let p = self.p as u64;
        let mut a: Vec<u64> = self.entries.iter().map(|&e| e as u64).collect();
        let mut det = 1u64;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return 0;
            };
            if piv != col {
                for c in 0..n {
                    a.swap(piv * n + c, col * n + c);
                }
                det = (p - det) % p;
            }
            let pv = a[col * n + col];
            det = det * pv % p;
            let inv = inv_mod(pv, p);
            for r in col + 1..n {
                let factor = a[r * n + col] * inv % p;
                if factor == 0 {
                    continue;
                }
                for c in col..n {
                    a[r * n + c] = (a[r * n + c] + p * p - factor * a[col * n + c] % p) % p;
                }
            }
        }
        det as u32
    }

    fn check_compatible(&self, other: &MatrixFp) -> Result<()> {
        if self.n != other.n || self.p != other.p {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} over F_{} vs {}x{} over F_{}",
                self.n, self.n, self.p, other.n, other.n, other.p
            )));
        }
        Ok(())
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn mul_into(a: &[u32], b: &[u32], n: usize, p: u32, out: &mut [u32]) {
    let p = p as u64;
    for i in 0..n {
        for j in 0..n {
            let mut s = 0u64;
            for k in 0..n {
                s += a[i * n + k] as u64 * b[k * n + j] as u64;
            }
            out[i * n + j] = (s % p) as u32;
        }
    }
}

/// Exact product `a * b` mod `p`.
pub fn mat_mul(a: &MatrixFp, b: &MatrixFp) -> Result<MatrixFp> {
    a.check_compatible(b)?;
    let mut out = MatrixFp::zero(a.n, a.p);
    mul_into(&a.entries, &b.entries, a.n, a.p, &mut out.entries);
    Ok(out)
}

/// `a^n = 0`, which by Cayley-Hamilton is equivalent to nilpotence.
pub fn is_nilpotent(a: &MatrixFp) -> bool {
    let n = a.n;
    if n == 0 {
        return true;
    }
    let mut power = a.entries.clone();
    let mut scratch = vec![0; n * n];
    for _ in 1..n {
        if power.iter().all(|&e| e == 0) {
            return true;
        }
        mul_into(&power, &a.entries, n, a.p, &mut scratch);
        std::mem::swap(&mut power, &mut scratch);
    }
    power.iter().all(|&e| e == 0)
}

fn commutes(a: &[u32], b: &[u32], n: usize, p: u32) -> bool {
    let p = p as u64;
    for i in 0..n {
        for j in 0..n {
            let mut ab = 0u64;
            let mut ba = 0u64;
            for k in 0..n {
                ab += a[i * n + k] as u64 * b[k * n + j] as u64;
                ba += b[i * n + k] as u64 * a[k * n + j] as u64;
            }
            if ab % p != ba % p {
                return false;
            }
        }
    }
    true
}

fn check_prime(p: u32) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidArgument(format!(
            "brute-force enumeration needs a prime field, got p = {p}"
        )));
    }
    Ok(())
}

fn matrix_space_size(p: u32, n: usize) -> Option<u128> {
    (p as u128).checked_pow((n * n) as u32)
}

fn charge(cost: Option<u128>, budget: u128) -> Result<()> {
    match cost {
        Some(c) if c <= budget => Ok(()),
        Some(c) => Err(Error::BudgetExceeded {
            required: c,
            budget,
        }),
        None => Err(Error::BudgetExceeded {
            required: u128::MAX,
            budget,
        }),
    }
}

fn cube(n: usize) -> u128 {
    (n as u128).pow(3)
}

/// Cost of scanning all matrices for nilpotence: up to `n - 1` products each.
fn nilpotent_scan_cost(p: u32, n: usize) -> Option<u128> {
    matrix_space_size(p, n)?.checked_mul(cube(n) * (n.max(2) as u128 - 1))
}

fn all_matrices(p: u32, n: usize) -> Vec<Vec<u32>> {
    let total = matrix_space_size(p, n).unwrap_or(0) as u64;
    (0..total)
        .map(|i| MatrixFp::from_index(n, p, i).entries)
        .collect()
}

fn count_commuting_among(mats: &[Vec<u32>], n: usize, p: u32) -> BigUint {
    let count: u64 = mats
        .par_iter()
        .map(|a| mats.iter().filter(|b| commutes(a, b, n, p)).count() as u64)
        .sum();
    BigUint::from(count)
}

/// Number of ordered pairs `(A, B)` of `n x n` matrices over `F_p` with `AB = BA`.
pub fn count_commuting_pairs(p: u32, n: usize, budget: u128) -> Result<BigUint> {
    check_prime(p)?;
    let size = matrix_space_size(p, n);
    let cost = size
        .and_then(|s| s.checked_mul(s))
        .and_then(|pairs| pairs.checked_mul(2 * cube(n)));
    charge(cost, budget)?;
    Ok(count_commuting_among(&all_matrices(p, n), n, p))
}

/// `|{B : AB = BA}|` by direct scan over all `B`.
pub fn centralizer_size(a: &MatrixFp) -> u64 {
    let total = matrix_space_size(a.p, a.n).unwrap_or(0) as u64;
    (0..total)
        .into_par_iter()
        .filter(|&i| {
            commutes(
                &a.entries,
                &MatrixFp::from_index(a.n, a.p, i).entries,
                a.n,
                a.p,
            )
        })
        .count() as u64
}

fn nilpotent_matrices(p: u32, n: usize) -> Vec<Vec<u32>> {
    let total = matrix_space_size(p, n).unwrap_or(0) as u64;
    (0..total)
        .into_par_iter()
        .filter_map(|i| {
            let m = MatrixFp::from_index(n, p, i);
            if is_nilpotent(&m) {
                assert!(
                    n == 0 || (m.trace() == 0 && m.determinant() == 0),
                    "nilpotent matrix with nonzero trace or determinant: {m:?}"
                );
                Some(m.entries)
            } else {
                None
            }
        })
        .collect()
}

/// Number of nilpotent `n x n` matrices over `F_p`.
pub fn count_nilpotent(p: u32, n: usize, budget: u128) -> Result<BigUint> {
    check_prime(p)?;
    charge(nilpotent_scan_cost(p, n), budget)?;
    Ok(BigUint::from(nilpotent_matrices(p, n).len()))
}

/// Number of ordered pairs of commuting nilpotent `n x n` matrices over `F_p`.
///
/// The nilpotent scan is charged first; the pair scan is charged once the
/// number of nilpotent matrices is known.
pub fn count_commuting_nilpotent_pairs(p: u32, n: usize, budget: u128) -> Result<BigUint> {
    check_prime(p)?;
    let scan = nilpotent_scan_cost(p, n);
    charge(scan, budget)?;
    let nil = nilpotent_matrices(p, n);
    let len = nil.len() as u128;
    let pairs = len
        .checked_mul(len)
        .and_then(|c| c.checked_mul(2 * cube(n)))
        .and_then(|c| c.checked_add(scan?));
    charge(pairs, budget)?;
    Ok(count_commuting_among(&nil, n, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn u(x: BigUint) -> u64 {
        x.to_u64().unwrap()
    }

    #[test]
    fn multiplication_basics() {
        let a = MatrixFp::from_entries(2, 5, &[1, 2, 3, 4]).unwrap();
        let id = MatrixFp::identity(2, 5);
        let z = MatrixFp::zero(2, 5);
        assert_eq!(mat_mul(&id, &a).unwrap(), a);
        assert_eq!(mat_mul(&z, &a).unwrap(), z);
        let e12 = MatrixFp::unit(2, 2, 0, 1);
        let e21 = MatrixFp::unit(2, 2, 1, 0);
        assert_eq!(mat_mul(&e12, &e21).unwrap(), MatrixFp::unit(2, 2, 0, 0));
        assert!(mat_mul(&a, &MatrixFp::zero(3, 5)).is_err());
        assert!(mat_mul(&a, &MatrixFp::zero(2, 7)).is_err());
    }

    #[test]
    fn entries_are_reduced() {
        let a = MatrixFp::from_entries(2, 3, &[-1, 3, 4, 5]).unwrap();
        assert_eq!(a.entries, vec![2, 0, 1, 2]);
        assert!(MatrixFp::from_entries(2, 3, &[1, 2, 3]).is_err());
    }

    #[test]
    fn index_order_is_little_endian_row_major() {
        let m = MatrixFp::from_index(2, 3, 1 + 2 * 3 + 27);
        assert_eq!(m.entries, vec![1, 2, 0, 1]);
    }

    #[test]
    fn nilpotence() {
        assert!(is_nilpotent(&MatrixFp::zero(3, 2)));
        assert!(!is_nilpotent(&MatrixFp::identity(1, 2)));
        assert!(!is_nilpotent(&MatrixFp::identity(3, 3)));
        assert!(is_nilpotent(&MatrixFp::unit(2, 2, 0, 1)));
        // [[1, 1], [-1, -1]] squares to zero over any field.
        assert!(is_nilpotent(
            &MatrixFp::from_entries(2, 7, &[1, 1, -1, -1]).unwrap()
        ));
    }

    #[test]
    fn determinant_small() {
        let a = MatrixFp::from_entries(2, 7, &[1, 2, 3, 4]).unwrap();
        assert_eq!(a.determinant(), (4 - 6i64).rem_euclid(7) as u32);
        let b = MatrixFp::from_entries(3, 5, &[0, 1, 0, 0, 0, 1, 1, 0, 0]).unwrap();
        assert_eq!(b.determinant(), 1);
    }

    #[test]
    fn commuting_pair_counts() {
        assert_eq!(u(count_commuting_pairs(2, 1, DEFAULT_BUDGET).unwrap()), 4);
        assert_eq!(u(count_commuting_pairs(2, 2, DEFAULT_BUDGET).unwrap()), 88);
        assert_eq!(u(count_commuting_pairs(2, 0, DEFAULT_BUDGET).unwrap()), 1);
    }

    #[test]
    fn centralizer_sum_equals_pair_count() {
        let total: u64 = (0..16)
            .map(|i| centralizer_size(&MatrixFp::from_index(2, 2, i)))
            .sum();
        assert_eq!(total, 88);
    }

    #[test]
    fn nilpotent_counts() {
        assert_eq!(u(count_nilpotent(2, 1, DEFAULT_BUDGET).unwrap()), 1);
        assert_eq!(u(count_nilpotent(2, 2, DEFAULT_BUDGET).unwrap()), 4);
        assert_eq!(u(count_nilpotent(3, 2, DEFAULT_BUDGET).unwrap()), 9);
        for (p, n) in [(2u32, 3usize), (2, 4), (3, 3), (5, 2), (7, 2)] {
            let expected = (p as u64).pow((n * n - n) as u32);
            assert_eq!(u(count_nilpotent(p, n, DEFAULT_BUDGET).unwrap()), expected);
        }
    }

    #[test]
    fn commuting_nilpotent_counts() {
        assert_eq!(
            u(count_commuting_nilpotent_pairs(2, 1, DEFAULT_BUDGET).unwrap()),
            1
        );
        assert_eq!(
            u(count_commuting_nilpotent_pairs(2, 2, DEFAULT_BUDGET).unwrap()),
            10
        );
    }

    #[test]
    fn budget_refusal() {
        let err = count_commuting_pairs(3, 3, DEFAULT_BUDGET).unwrap_err();
        assert!(err.is_refusal());
        assert!(count_commuting_pairs(2, 2, 100).is_err());
        assert!(count_nilpotent(2, 6, DEFAULT_BUDGET).is_err());
        assert!(count_commuting_pairs(4, 1, DEFAULT_BUDGET).is_err());
        assert!(count_commuting_pairs(2, 40, DEFAULT_BUDGET).is_err());
    }
}
