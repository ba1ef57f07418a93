//! Exact counts of commuting pairs, nilpotent matrices and commuting nilpotent
//! pairs over `F_q`, together with the coefficients of their normalized
//! generating functions (count divided by `|GL_n(F_q)|`).

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{
    big, f_q, f_q_table, gl_order, partitions, q_pow, to_natural, ExactRational, PrimePower,
};
use crate::error::Result;

/// An exact count together with its normalization by the group order.
#[derive(Debug, Clone, PartialEq)]
pub struct CountResult {
    pub q: PrimePower,
    pub n: u32,
    pub value: BigUint,
    /// `value / |GL_n(F_q)|`
    pub normalized: ExactRational,
}

impl CountResult {
    fn from_normalized(
        q: &PrimePower,
        n: u32,
        normalized: ExactRational,
        what: &'static str,
    ) -> Result<Self> {
        let order = BigRational::from_integer(big(&gl_order(q, n)?));
        let value = to_natural(&(&normalized * order), what, q, n)?;
        Ok(CountResult {
            q: q.clone(),
            n,
            value,
            normalized,
        })
    }
}

/// `sum_{lambda |- n} prod_k weights[b_k]` over all partitions of `n`.
fn partition_sum(n: u32, weights: &[ExactRational]) -> ExactRational {
    let all: Vec<_> = partitions(n).collect();
    all.par_iter()
        .map(|p| {
            p.nonzero()
                .fold(BigRational::one(), |acc, (_, b)| acc * &weights[b as usize])
        })
        .reduce(BigRational::zero, |a, b| a + b)
}

/// `q^{sign * b} / f_q(b)` for `b = 0..=n`: the coefficients of one Euler factor.
fn euler_weights(q: &PrimePower, n: u32, sign: i64) -> Vec<ExactRational> {
    f_q_table(q, n)
        .into_iter()
        .enumerate()
        .map(|(b, f)| q_pow(q, sign * b as i64) / f)
        .collect()
}

/// `Q_q(n)`, the number of ordered pairs of commuting `n x n` matrices over `F_q`,
/// from the partition sum `|GL_n| * sum_lambda q^{sum b_k} / prod f_q(b_k)`.
pub fn commuting_pairs(q: &PrimePower, n: u32) -> Result<CountResult> {
    let normalized = partition_sum(n, &euler_weights(q, n, 1));
    CountResult::from_normalized(q, n, normalized, "commuting_pairs")
}

/// Coefficients `0..=n_max` of `prod_{l>=1, j>=0} (1 - q^{1-j} w^l)^{-1}`.
///
/// Each `l` contributes the exact Euler factor `sum_k q^k w^{lk} / f_q(k)`; the
/// product over `l <= n_max` with factors truncated at `k <= n_max / l` is exact
/// up to `w^{n_max}`.
pub fn commuting_series(q: &PrimePower, n_max: u32) -> Vec<ExactRational> {
    let len = n_max as usize + 1;
    let weights = euler_weights(q, n_max, 1);
    let mut acc = vec![BigRational::zero(); len];
    acc[0] = BigRational::one();
    for l in 1..len {
        let mut next = acc.clone();
        for (a, coeff) in acc.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (k, w) in weights.iter().enumerate().skip(1) {
                let e = a + k * l;
                if e >= len {
                    break;
                }
                next[e] += coeff * w;
            }
        }
        acc = next;
    }
    acc
}

/// Coefficient of `w^n` in the commuting-pair generating function, computed by
/// series multiplication rather than the partition sum.
pub fn commuting_series_coeff(q: &PrimePower, n: u32) -> ExactRational {
    commuting_series(q, n)
        .pop()
        .unwrap_or_else(BigRational::one)
}

/// `|Nilp_n(F_q)| / |GL_n(F_q)| = q^{-n} / f_q(n)`.
pub fn nilpotent_series_coeff(q: &PrimePower, n: u32) -> ExactRational {
    q_pow(q, -(n as i64)) / f_q(q, n)
}

/// `|Nilp_n(F_q)|`, which equals `q^{n^2 - n}`.
pub fn nilpotent_count(q: &PrimePower, n: u32) -> Result<CountResult> {
    CountResult::from_normalized(q, n, nilpotent_series_coeff(q, n), "nilpotent_count")
}

/// Coefficient of `w^n` in `prod_{l>=1, j>=0} (1 - q^{-1-j} w^l)^{-1}`, as the
/// partition sum `sum_lambda q^{-sum b_k} / prod f_q(b_k)`.
pub fn nilpotent_commuting_series_coeff(q: &PrimePower, n: u32) -> ExactRational {
    partition_sum(n, &euler_weights(q, n, -1))
}

/// Number of ordered pairs of commuting nilpotent `n x n` matrices over `F_q`.
pub fn nilpotent_commuting_pairs(q: &PrimePower, n: u32) -> Result<CountResult> {
    CountResult::from_normalized(
        q,
        n,
        nilpotent_commuting_series_coeff(q, n),
        "nilpotent_commuting_pairs",
    )
}

/// `Q_q(n) / q^{n^2 + n}`, the quantity that converges to the plane constant.
pub fn commuting_growth_ratio(q: &PrimePower, n: u32) -> Result<ExactRational> {
    let count = commuting_pairs(q, n)?;
    let e = (n as i64) * (n as i64) + n as i64;
    Ok(BigRational::from_integer(BigInt::from(count.value)) / q_pow(q, e))
}
