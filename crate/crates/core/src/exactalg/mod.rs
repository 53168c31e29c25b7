//! Exact scalars, polynomials, rational functions and partial fractions.

pub mod gcd;
pub mod partial;
pub mod poly;
pub mod rational;
pub mod ratfunc;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use partial::{
    partial_fractions_t, partial_fractions_v, PartialFractionT, PartialFractionV, PoleT, TFactor,
    VBasis,
};
pub use poly::{Exps, Poly, Vars};
pub use rational::{binomial_series_coeff, format_rational, parse_rational, rat};
pub use ratfunc::RatFunc;

/// Reduced, sign-normalized `num / den`.
pub fn normalize(num: Poly, den: Poly) -> crate::Result<RatFunc> {
    RatFunc::normalize(num, den)
}
