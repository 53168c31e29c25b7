//! Scalar helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

use crate::error::{Error, Result};

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Renders as `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// Coefficient of `z^m` in `(1 - z)^-(k+1)`, i.e. `C(k+m, k)`.
pub fn binomial_series_coeff(k: u64, m: u64) -> BigRational {
    BigRational::from_integer(binomial(k + m, k))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Decimal rendering with `digits` places after the point, truncated toward
/// zero. Only for human-readable approximations.
pub fn decimal_approx(r: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (r.abs() * BigRational::from_integer(scale.clone())).to_integer();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    let sign = if r.is_negative() && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits)
}

/// Lossy conversion for display only.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) mod serde_str {
    use super::{format_rational, parse_rational};
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Coefficients of `(1-z)^-(k+1)` by repeated multiplication with the
    /// geometric series, truncated at degree `m`.
    fn series_power_oracle(k: u64, m: usize) -> Vec<BigInt> {
        let mut acc = vec![BigInt::zero(); m + 1];
        acc[0] = BigInt::one();
        for _ in 0..=k {
            // multiply by 1/(1-z): prefix sums
            for i in 1..=m {
                let prev = acc[i - 1].clone();
                acc[i] += prev;
            }
        }
        acc
    }

    #[test]
    fn binomial_examples() {
        for m in 0..10 {
            assert_eq!(binomial_series_coeff(0, m), int(1));
        }
        assert_eq!(binomial_series_coeff(1, 3), int(4));
        let oracle = series_power_oracle(5, 7);
        assert_eq!(oracle[7], BigInt::from(792));
        assert_eq!(binomial_series_coeff(5, 7), int(792));
    }

    #[test]
    fn binomial_matches_series_division() {
        for k in 0..=12u64 {
            let oracle = series_power_oracle(k, 12);
            for m in 0..=12u64 {
                assert_eq!(
                    binomial_series_coeff(k, m),
                    BigRational::from_integer(oracle[m as usize].clone()),
                    "k={k} m={m}"
                );
            }
        }
    }

    #[test]
    fn string_forms() {
        assert_eq!(format_rational(&rat(6, 4)), "3/2");
        assert_eq!(format_rational(&rat(-8, 4)), "-2");
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("17").unwrap(), int(17));
        assert_eq!(parse_rational("1/0"), Err(Error::ZeroDenominator));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal_approx(&rat(1, 3), 4), "0.3333");
        assert_eq!(decimal_approx(&rat(-7, 2), 2), "-3.50");
        assert_eq!(decimal_approx(&int(5), 0), "5");
    }
}
