//! Arbitrary-precision certified numerics: binary big floats, midpoint-radius
//! balls, constants, and the infinite products behind the asymptotic
//! coefficients.

mod ball;
mod bigfloat;
mod consts;
mod products;

pub use ball::{ComplexBall, RealBall};
pub use bigfloat::BigFloat;
pub use consts::{pi, unit_root, zeta2, zeta3};
pub use products::{
    euler_f_infinity, eval_f, eval_p, plane_constant, shifted_plane_constant, working_bits,
    EvalResult, GUARD_DIGITS,
};

use num_bigint::BigInt;

use crate::arith::ExactRational;

/// Rounds an exact rational into a ball at `prec` bits.
pub fn ball_from_rational(x: &ExactRational, prec: u32) -> RealBall {
    RealBall::from_ratio(x.numer(), x.denom(), prec)
}

pub fn ball_from_int(n: impl Into<BigInt>) -> RealBall {
    RealBall::from_int(n)
}
