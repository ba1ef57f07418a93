//! Asymptotic expansion of the normalized commuting-pair counts,
//!
//! `Q_q(n) / (q^{n^2} f_q(n)) ~ sum_{m>=1} C_{m,q}(n) q^{n/m}`,
//!
//! with `C_{m,q}(n) = (1/m) sum_{j<m} P_{m,q}(w_j) F_q(w_j) zeta_m^{nj}` and
//! `w_j = zeta_m^{-j} q^{-1/m}`. Each term is the partial-fraction contribution
//! of the poles of the generating function on the circle `|w| = q^{-1/m}`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::analytic::{
    ball_from_rational, eval_f, eval_p, plane_constant, unit_root, working_bits, zeta3, BigFloat,
    ComplexBall, RealBall,
};
use crate::arith::PrimePower;
use crate::counts::commuting_series;
use crate::error::{Error, Result};

/// Digits carried internally on top of the requested output precision.
const EXTRA_DIGITS: u32 = 6;

fn internal_digits(digits: u32, m: u32) -> u32 {
    digits + EXTRA_DIGITS + (m as f64).log10().ceil() as u32
}

/// `q^{-1/m}` as a ball.
fn pole_radius(q: &PrimePower, m: u32, prec: u32) -> RealBall {
    RealBall::root_of_ratio(&BigUint::one(), q.q(), m, prec)
}

/// `q^{n/m}` as a ball.
fn q_root_power(q: &PrimePower, n: u64, m: u32, prec: u32) -> RealBall {
    RealBall::root_of_ratio(&q.pow(n), &BigUint::one(), m, prec)
}

/// The pole residues `c_{m,j} = P_{m,q}(w_j) F_q(w_j)` for `j = 0..m`.
#[derive(Clone, Debug)]
pub struct PoleProducts {
    pub m: u32,
    pub values: Vec<ComplexBall>,
    prec: u32,
}

pub fn pole_products(q: &PrimePower, m: u32, digits: u32) -> Result<PoleProducts> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be >= 1".into()));
    }
    let d = internal_digits(digits, m);
    let prec = working_bits(d + 10, 1);
    let radius = pole_radius(q, m, prec);
    let x = RealBall::exact(BigFloat::from_int(BigInt::from(q.q().clone())));
    let values = (0..m)
        .map(|j| {
            let w = unit_root(m, -(j as i64), prec).mul_real(&radius, prec);
            let p = eval_p(m as u64, &x, &w, d)?;
            let f = eval_f(q, &w, d)?;
            Ok(p.value.mul(&f.value, prec))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PoleProducts { m, values, prec })
}

impl PoleProducts {
    /// `C_{m,q}(n)`, checked to be real within its certified error.
    pub fn coefficient(&self, n: i64) -> Result<RealBall> {
        let m = self.m;
        let prec = self.prec;
        let mut sum = ComplexBall::zero();
        for (j, c) in self.values.iter().enumerate() {
            let phase = unit_root(m, n.rem_euclid(m as i64) * j as i64, prec);
            sum = sum.add(&c.mul(&phase, prec), prec);
        }
        let avg = sum.div_int(m as u64, prec);
        let imag = avg.im.abs_upper();
        if imag > avg.rad {
            return Err(Error::RealnessViolation {
                what: format!("C_{{{m},q}}({n})"),
                imag,
                bound: avg.rad,
            });
        }
        Ok(avg.real_part())
    }

    /// `|c_{m,j}|` upper bounds, index `j`.
    pub fn moduli(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.mid_abs_upper()).collect()
    }
}

/// `C_{m,q}(n)` with a certified error. Depends on `n` only through `n mod m`.
pub fn coeff_c(q: &PrimePower, m: u32, n: i64, digits: u32) -> Result<RealBall> {
    pole_products(q, m, digits)?.coefficient(n)
}

/// `C_{m,q}` for every `m <= max_m` and every residue of `n` modulo `m`.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    pub q: PrimePower,
    pub digits: u32,
    entries: BTreeMap<(u32, u32), RealBall>,
}

impl CoefficientTable {
    pub fn build(q: &PrimePower, max_m: u32, digits: u32) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for m in 1..=max_m {
            let poles = pole_products(q, m, digits)?;
            for residue in 0..m {
                entries.insert((m, residue), poles.coefficient(residue as i64)?);
            }
        }
        Ok(CoefficientTable {
            q: q.clone(),
            digits,
            entries,
        })
    }

    pub fn max_m(&self) -> u32 {
        self.entries.keys().map(|&(m, _)| m).max().unwrap_or(0)
    }

    /// `C_{m,q}(n)` for any integer `n`.
    pub fn get(&self, m: u32, n: i64) -> Option<&RealBall> {
        if m == 0 {
            return None;
        }
        self.entries.get(&(m, n.rem_euclid(m as i64) as u32))
    }

    /// Entries as `(m, residue, value)` with residues in `0..m`.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, &RealBall)> {
        self.entries.iter().map(|(&(m, r), v)| (m, r, v))
    }

    /// Largest minus smallest `C_{m,q}(n)` over the residues of `m`.
    pub fn spread(&self, m: u32) -> Option<f64> {
        let vals: Vec<f64> = (0..m)
            .filter_map(|r| self.get(m, r as i64))
            .map(|b| b.to_f64())
            .collect();
        if vals.is_empty() {
            return None;
        }
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Some(hi - lo)
    }

    /// `sum_{m=1}^{terms} C_{m,q}(n) q^{n/m}` with `terms <= max_m()`.
    pub fn expansion(&self, n: u32, terms: u32) -> Result<RealBall> {
        if terms == 0 {
            return Err(Error::InvalidArgument(
                "the truncation N must be >= 1".into(),
            ));
        }
        expansion_from_table(self, n, terms, expansion_prec(&self.q, n, self.digits))
    }
}

/// Residue `n mod m` in the `1..=m` convention used for display.
pub fn display_residue(n: i64, m: u32) -> u32 {
    match n.rem_euclid(m as i64) as u32 {
        0 => m,
        r => r,
    }
}

fn expansion_from_table(
    table: &CoefficientTable,
    n: u32,
    terms: u32,
    prec: u32,
) -> Result<RealBall> {
    let mut sum = RealBall::zero();
    for m in 1..=terms {
        let c = table
            .get(m, n as i64)
            .ok_or_else(|| Error::InvalidArgument(format!("table has no entries for m = {m}")))?;
        let growth = q_root_power(&table.q, n as u64, m, prec);
        sum = sum.add(&c.mul(&growth, prec), prec);
    }
    Ok(sum)
}

fn expansion_prec(q: &PrimePower, n: u32, digits: u32) -> u32 {
    // Values reach q^n * C_1, so carry the integer bits as well.
    working_bits(digits + 10, 1) + (n as f64 * q.q_f64().log2()).ceil() as u32
}

/// `sum_{m=1}^{terms} C_{m,q}(n) q^{n/m}`, the expansion truncated after `terms` pole circles.
pub fn expansion_eval(q: &PrimePower, n: u32, terms: u32, digits: u32) -> Result<RealBall> {
    if terms == 0 {
        return Err(Error::InvalidArgument(
            "the truncation N must be >= 1".into(),
        ));
    }
    CoefficientTable::build(q, terms, digits)?.expansion(n, terms)
}

/// `q^{n^2 + n} prod_{j>=1} (1 - q^{-j})^{-j}`.
pub fn leading_term(q: &PrimePower, n: u32, digits: u32) -> Result<RealBall> {
    let e = (n as u64) * (n as u64) + n as u64;
    if e as f64 * q.q_f64().log10() > 290.0 {
        return Err(Error::InvalidArgument(format!(
            "q^(n^2+n) = {q}^{e} is outside the supported magnitude range"
        )));
    }
    let c = plane_constant(q, digits)?;
    let prec = working_bits(digits, 1) + c.mid.log2_floor().unwrap_or(0).max(0) as u32;
    Ok(c.mul(&RealBall::from_int(BigInt::from(q.pow(e))), prec))
}

/// Exact normalized coefficient minus the expansion truncated after `terms`
/// circles, for every `n` in `ns`. `terms = 0` returns the coefficients themselves.
pub fn remainders(q: &PrimePower, ns: &[u32], terms: u32, digits: u32) -> Result<Vec<RealBall>> {
    let n_max = ns.iter().copied().max().unwrap_or(0);
    let exact = commuting_series(q, n_max);
    let table = if terms > 0 {
        Some(CoefficientTable::build(q, terms, digits)?)
    } else {
        None
    };
    ns.iter()
        .map(|&n| {
            let prec = expansion_prec(q, n, digits);
            let coeff = ball_from_rational(&exact[n as usize], prec);
            match &table {
                None => Ok(coeff),
                Some(t) => Ok(coeff.sub(&expansion_from_table(t, n, terms, prec)?, prec)),
            }
        })
        .collect()
}

pub fn remainder(q: &PrimePower, n: u32, terms: u32, digits: u32) -> Result<RealBall> {
    Ok(remainders(q, &[n], terms, digits)?.remove(0))
}

/// Empirical decay rate `log_q |r| / n`.
pub fn decay_rate(q: &PrimePower, rem: &RealBall, n: u32) -> f64 {
    rem.to_f64().abs().log2() / (n as f64 * q.q_f64().log2())
}

/// `|P_{m,q}(q^{-1/m}) F_q(q^{-1/m})|`, the bound on `|C_{m,q}(n)|` for every `n`.
pub fn c_bound(q: &PrimePower, m: u32, digits: u32) -> Result<RealBall> {
    Ok(c_bound_report(q, m, digits)?.bound)
}

/// The bound together with the moduli `|c_{m,j}|` behind it.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub bound: RealBall,
    pub moduli: Vec<f64>,
    /// Index `j` with the largest `|c_{m,j}|`.
    pub argmax: usize,
}

impl BoundReport {
    pub fn max_at_real_point(&self) -> bool {
        self.argmax == 0
    }
}

pub fn c_bound_report(q: &PrimePower, m: u32, digits: u32) -> Result<BoundReport> {
    let poles = pole_products(q, m, digits)?;
    let c0 = poles.values[0].real_part();
    let bound = if c0.mid.is_negative() { c0.neg() } else { c0 };
    let moduli = poles.moduli();
    let argmax = moduli
        .iter()
        .enumerate()
        .fold(0, |best, (j, &v)| if v > moduli[best] { j } else { best });
    Ok(BoundReport {
        bound,
        moduli,
        argmax,
    })
}

/// `exp((zeta(3) + epsilon) / (1 - q^{-1/m})^2)`.
///
/// The corresponding upper bound on `C_{m,q}(n)` holds only up to an
/// unspecified constant, so this value is a diagnostic to report next to
/// `|C_{m,q}|`, not an inequality to enforce.
pub fn prop_bound_diag(q: &PrimePower, m: u32, epsilon: f64, digits: u32) -> Result<RealBall> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be >= 1".into()));
    }
    let eps = BigFloat::from_f64(epsilon)
        .filter(|_| epsilon > 0.0)
        .ok_or_else(|| {
            Error::InvalidArgument(format!("epsilon must be a positive real, got {epsilon}"))
        })?;
    // The exponent can reach ~ m^2; keep its integer bits as well.
    let prec = working_bits(digits, 1) + 2 * (32 - m.leading_zeros()) + 16;
    let gap = RealBall::one().sub(&pole_radius(q, m, prec), prec);
    let num = zeta3(prec).add(&RealBall::exact(eps), prec);
    let exponent = num.div(&gap.mul(&gap, prec), prec)?;
    Ok(exponent.exp(prec))
}



#[cfg(test)]
mod remainder_tests {
    use super::*;

    #[test]
    fn coefficient_ratio_tends_to_c1() {
        let qq = PrimePower::from_q(2).unwrap();
        let c1 = coeff_c(&qq, 1, 0, 20).unwrap().to_f64();
        let ns = [10u32, 20, 30, 40];
        let rems = remainders(&qq, &ns, 0, 20).unwrap();
        let mut last = f64::INFINITY;
        for (n, r) in ns.iter().zip(&rems) {
            let gap = (r.to_f64() / 2f64.powi(*n as i32) / c1 - 1.0).abs();
            assert!(gap < last, "n = {n}");
            last = gap;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn first_remainder_within_second_circle_bound() {
        let qq = PrimePower::from_q(2).unwrap();
        let bound = c_bound(&qq, 2, 15).unwrap().to_f64();
        for n in [15u32, 20, 25] {
            let r = remainder(&qq, n, 1, 20).unwrap().to_f64();
            let scaled = r.abs() / 2f64.powf(n as f64 / 2.0);
            assert!(scaled <= bound, "n = {n}: {scaled} > {bound}");
        }
    }

    #[test]
    fn batch_matches_single() {
        let qq = PrimePower::from_q(3).unwrap();
        let batch = remainders(&qq, &[5, 9], 2, 15).unwrap();
        let single = remainder(&qq, 9, 2, 15).unwrap();
        assert!(batch[1].mid.sub(&single.mid).abs_upper() <= batch[1].rad + single.rad);
    }
}
