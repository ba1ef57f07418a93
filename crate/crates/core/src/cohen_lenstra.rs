//! Closed-form series for `|Nilp_n(F_q)| / |GL_n(F_q)|`:
//!
//! `sum_{m>=1} Z_m(q^m) q^{-nm}`, `Z_m(w) = prod_{j>=1, j!=m} (1 - q^{-j} w)^{-1}`,
//!
//! truncated to `m <= M` terms and `j <= N` factors per product. For rational
//! `w` every factor is rational, so truncated values are computed exactly and
//! rounded once at the end.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::analytic::{ball_from_rational, working_bits, RealBall};
use crate::arith::{q_pow, ExactRational, PrimePower};
use crate::error::{Error, Result};

pub const DEFAULT_M: u32 = 10;
pub const DEFAULT_N: u32 = 100;

#[derive(Clone, Debug)]
pub struct CLSeriesParams {
    pub q: PrimePower,
    pub n: u32,
    pub big_m: u32,
    pub big_n: u32,
    pub digits: u32,
}

impl CLSeriesParams {
    pub fn new(q: PrimePower, n: u32, big_m: u32, big_n: u32, digits: u32) -> Result<Self> {
        if big_m < 1 {
            return Err(Error::InvalidArgument("M must be >= 1".into()));
        }
        if big_n < big_m {
            return Err(Error::InvalidArgument(format!(
                "N = {big_n} must be >= M = {big_m}"
            )));
        }
        Ok(CLSeriesParams {
            q,
            n,
            big_m,
            big_n,
            digits,
        })
    }

    pub fn with_defaults(q: PrimePower, n: u32, digits: u32) -> Self {
        CLSeriesParams {
            q,
            n,
            big_m: DEFAULT_M,
            big_n: DEFAULT_N,
            digits,
        }
    }
}

/// `prod_{1<=j<=N, j!=m} (1 - q^{-j} w)^{-1}`, exactly.
pub fn z_m_truncated(
    q: &PrimePower,
    m: u32,
    big_n: u32,
    w: &ExactRational,
) -> Result<ExactRational> {
    if m < 1 || m > big_n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= m <= N, got m = {m}, N = {big_n}"
        )));
    }
    // Factor j is (q^j b - a) / (q^j b) for w = a / b; reduce once at the end.
    let (a, b) = (w.numer(), w.denom());
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in (1..=big_n).filter(|&j| j != m) {
        let qjb = BigInt::from(q.pow(j as u64)) * b;
        let factor = &qjb - a;
        if factor.is_zero() {
            return Err(Error::PoleProximity {
                exponent: j as u64,
                distance: 0.0,
                threshold: 0.0,
            });
        }
        num *= qjb;
        den *= factor;
    }
    Ok(ExactRational::new(num, den))
}

/// A truncated series value: the exact rational and its rounding to the requested digits.
#[derive(Clone, Debug)]
pub struct CLSeriesValue {
    pub exact: ExactRational,
    pub value: RealBall,
    pub terms: Vec<ExactRational>,
}

/// `sum_{m=1}^{M} Z_{m,N}(q^m) q^{-nm}`.
pub fn nilp_ratio_series(params: &CLSeriesParams) -> Result<CLSeriesValue> {
    let p = CLSeriesParams::new(
        params.q.clone(),
        params.n,
        params.big_m,
        params.big_n,
        params.digits,
    )?;
    let q = &p.q;
    let terms = (1..=p.big_m)
        .into_par_iter()
        .map(|m| {
            let w = ExactRational::from_integer(BigInt::from(q.pow(m as u64)));
            Ok(z_m_truncated(q, m, p.big_n, &w)? * q_pow(q, -((p.n as i64) * m as i64)))
        })
        .collect::<Result<Vec<_>>>()?;
    let exact = terms.iter().fold(ExactRational::zero(), |acc, t| acc + t);
    let value = ball_from_rational(&exact, working_bits(p.digits + 20, 1));
    Ok(CLSeriesValue {
        exact,
        value,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counts::nilpotent_series_coeff;
    use num_traits::{Signed, ToPrimitive};

    fn q(v: u64) -> PrimePower {
        PrimePower::from_q(v).unwrap()
    }

    fn int(v: u64) -> ExactRational {
        ExactRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn z_examples() {
        let z = z_m_truncated(&q(2), 1, 100, &int(2)).unwrap();
        let b = ball_from_rational(&z, 100);
        assert!(b.mid.to_decimal(20).starts_with("3.46274661945"));
        assert_eq!(
            z_m_truncated(&q(2), 1, 1, &int(12345)).unwrap(),
            ExactRational::one()
        );
        let z2 = z_m_truncated(&q(2), 2, 100, &int(4)).unwrap();
        assert!((z2.to_f64().unwrap() + 3.4627466194550).abs() < 1e-10);
    }

    #[test]
    fn z_refuses_poles_and_bad_m() {
        assert!(matches!(
            z_m_truncated(&q(2), 1, 10, &int(8)),
            Err(Error::PoleProximity { exponent: 3, .. })
        ));
        assert!(z_m_truncated(&q(2), 0, 10, &int(2)).is_err());
        assert!(z_m_truncated(&q(2), 11, 10, &int(2)).is_err());
    }

    #[test]
    fn params_validated() {
        assert!(CLSeriesParams::new(q(2), 0, 0, 10, 20).is_err());
        assert!(CLSeriesParams::new(q(2), 0, 5, 4, 20).is_err());
        assert!(CLSeriesParams::new(q(2), 0, 5, 5, 20).is_ok());
    }

    #[test]
    fn table_rows() {
        let rows = [
            (0, "0.999999999999999667"),
            (1, "0.9999999999999999998"),
            (2, "0.6666666666666666666"),
            (3, "0.3809523809523809523"),
            (4, "0.2031746031746031746"),
        ];
        for (n, printed) in rows {
            let v = nilp_ratio_series(&CLSeriesParams::with_defaults(q(2), n, 30)).unwrap();
            let s = v.value.mid.to_decimal(40);
            let digits = printed.len();
            // Printed rows are truncated, not rounded.
            assert_eq!(&s[..digits], printed, "n = {n}: {s}");
        }
    }

    #[test]
    fn agrees_with_exact_ratio() {
        for n in 1..=4 {
            let v = nilp_ratio_series(&CLSeriesParams::with_defaults(q(2), n, 30)).unwrap();
            let exact = nilpotent_series_coeff(&q(2), n);
            let rel = ((&v.exact - &exact) / &exact).abs().to_f64().unwrap();
            assert!(rel < 1e-15, "n = {n}: {rel}");
        }
    }

    #[test]
    fn error_shrinks_with_truncation() {
        for qv in [2u64, 3] {
            for n in 0..=6 {
                let exact = nilpotent_series_coeff(&q(qv), n);
                let mut last = f64::INFINITY;
                for (mm, nn) in [(3, 10), (5, 30), (10, 100)] {
                    let p = CLSeriesParams::new(q(qv), n, mm, nn, 20).unwrap();
                    let err = (nilp_ratio_series(&p).unwrap().exact - &exact)
                        .abs()
                        .to_f64()
                        .unwrap();
                    assert!(err < last, "q = {qv}, n = {n}, M = {mm}");
                    last = err;
                }
            }
        }
    }
}
