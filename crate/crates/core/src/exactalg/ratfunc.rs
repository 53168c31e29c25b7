//! Reduced rational functions in one or two variables.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::gcd::poly_gcd;
use super::poly::{Poly, Vars};
use crate::error::{Error, Result};

/// `num / den` kept in lowest terms. The denominator is a primitive integer
/// polynomial whose least term (by total degree, then degree in the first
/// variable) is positive, so equal functions have identical parts.
#[derive(Clone, Debug, Serialize)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Reduces `num / den` to normal form.
    pub fn normalize(num: Poly, den: Poly) -> Result<RatFunc> {
        if num.vars() != den.vars() {
            return Err(Error::Variables(format!(
                "numerator over {} but denominator over {}",
                num.vars(),
                den.vars()
            )));
        }
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero(num.vars()));
        }
        let g = poly_gcd(&num, &den);
        if g.is_constant() {
            return Ok(Self::scaled(num, den));
        }
        let num = num.div_exact(&g).expect("gcd divides numerator");
        let den = den.div_exact(&g).expect("gcd divides denominator");
        Ok(Self::scaled(num, den))
    }

    /// Fixes the unit of an already reduced fraction.
    fn scaled(num: Poly, den: Poly) -> RatFunc {
        let unit = denominator_unit(&den);
        if unit.is_one() {
            return RatFunc { num, den };
        }
        let inv = unit.recip();
        RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        let den = Poly::one(p.vars());
        RatFunc { num: p, den }
    }

    pub fn zero(vars: &Vars) -> RatFunc {
        RatFunc::from_poly(Poly::zero(vars))
    }

    pub fn one(vars: &Vars) -> RatFunc {
        RatFunc::from_poly(Poly::one(vars))
    }

    pub fn constant(vars: &Vars, c: BigRational) -> RatFunc {
        RatFunc::from_poly(Poly::constant(vars, c))
    }

    pub fn var(vars: &Vars, name: &str) -> Result<RatFunc> {
        Ok(RatFunc::from_poly(Poly::var(vars, name)?))
    }

    /// Convenience constructor from two polynomial strings.
    pub fn parse(vars: &Vars, num: &str, den: &str) -> Result<RatFunc> {
        RatFunc::normalize(Poly::parse(vars, num)?, Poly::parse(vars, den)?)
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn into_parts(self) -> (Poly, Poly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the Maclaurin expansion exists.
    pub fn is_expandable(&self) -> bool {
        !self.den.constant_term().is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Equality by cross-multiplication.
    pub fn cross_eq(&self, other: &RatFunc) -> bool {
        self.vars() == other.vars() && &self.num * &other.den == &other.num * &self.den
    }

    pub fn recip(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::scaled(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<RatFunc> {
        Ok(self * &rhs.recip()?)
    }

    pub fn scale(&self, c: &BigRational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero(self.vars());
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, k: u32) -> RatFunc {
        // powers of coprime parts stay coprime
        Self::scaled(self.num.pow(k), self.den.pow(k))
    }

    pub fn embed(&self, target: &Vars) -> Result<RatFunc> {
        Ok(Self::scaled(self.num.embed(target)?, self.den.embed(target)?))
    }

    /// Value at a point given in variable order.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::Domain("denominator vanishes at the evaluation point".into()));
        }
        Ok(self.num.eval(point) / d)
    }

    /// Simultaneous substitution of variables by rational functions.
    ///
    /// All bound values must share one variable list, which becomes the
    /// variable list of the result; unbound variables are carried over by
    /// name and must occur in it.
    pub fn substitute(&self, bindings: &[(&str, &RatFunc)]) -> Result<RatFunc> {
        let Some((_, first)) = bindings.first() else {
            return Ok(self.clone());
        };
        let target = first.vars().clone();
        for (name, value) in bindings {
            if value.vars() != &target {
                return Err(Error::Variables(format!(
                    "substituted values over {} and {}",
                    target,
                    value.vars()
                )));
            }
            if self.vars().index(name).is_none() {
                return Err(Error::Variables(format!("{name} not in {}", self.vars())));
            }
        }

        // value of each source variable as (numerator, denominator) over target
        let mut values: Vec<(Poly, Poly)> = Vec::new();
        for name in self.vars().names() {
            match bindings.iter().find(|(n, _)| n == name) {
                Some((_, v)) => values.push((v.num.clone(), v.den.clone())),
                None => values.push((Poly::var(&target, name)?, Poly::one(&target))),
            }
        }

        let degs: Vec<u32> = (0..values.len())
            .map(|k| {
                self.num
                    .degree_in(k)
                    .unwrap_or(0)
                    .max(self.den.degree_in(k).unwrap_or(0))
            })
            .collect();
        let powers = |p: &Poly, n: u32| {
            let mut out = vec![Poly::one(&target)];
            for _ in 0..n {
                let next = out.last().unwrap() * p;
                out.push(next);
            }
            out
        };
        let num_pows: Vec<Vec<Poly>> =
            values.iter().zip(&degs).map(|((n, _), &d)| powers(n, d)).collect();
        let den_pows: Vec<Vec<Poly>> =
            values.iter().zip(&degs).map(|((_, d), &k)| powers(d, k)).collect();

        // homogenized evaluation: the common factor prod d_k^D_k cancels
        let eval = |p: &Poly| {
            let mut acc = Poly::zero(&target);
            for (e, c) in p.terms() {
                let mut term = Poly::constant(&target, c.clone());
                for k in 0..values.len() {
                    let i = e[k] as usize;
                    let d = degs[k] as usize;
                    term = &term * &num_pows[k][i];
                    term = &term * &den_pows[k][d - i];
                }
                acc = &acc + &term;
            }
            acc
        };
        let num = eval(&self.num);
        let den = eval(&self.den);
        if den.is_zero() {
            return Err(Error::Domain("substitution makes the denominator vanish".into()));
        }
        RatFunc::normalize(num, den)
    }
}

/// The rational `u` with `den / u` primitive over the integers and with a
/// positive least term.
fn denominator_unit(den: &Poly) -> BigRational {
    use num_bigint::BigInt;
    use num_integer::Integer;
    let lcm = den.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let content = den.terms().fold(BigInt::zero(), |acc, (_, c)| {
        acc.gcd(&(c * BigRational::from_integer(lcm.clone())).to_integer())
    });
    let mut unit = BigRational::new(content, lcm);
    if den.least_term().is_some_and(|(_, c)| c.is_negative()) {
        unit = -unit;
    }
    unit
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.cross_eq(other)
    }
}

impl Eq for RatFunc {}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let g = poly_gcd(&self.den, &rhs.den);
        let (num, den) = if g.is_constant() {
            (&self.num * &rhs.den + &rhs.num * &self.den, &self.den * &rhs.den)
        } else {
            let b = self.den.div_exact(&g).expect("gcd divides");
            let d = rhs.den.div_exact(&g).expect("gcd divides");
            (&self.num * &d + &rhs.num * &b, &self.den * &d)
        };
        RatFunc::normalize(num, den).expect("nonzero denominator")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.vars());
        }
        // cross-cancel; inputs are reduced so the product is reduced
        let cancel = |n: &Poly, d: &Poly| {
            let g = poly_gcd(n, d);
            if g.is_constant() {
                (n.clone(), d.clone())
            } else {
                (n.div_exact(&g).unwrap(), d.div_exact(&g).unwrap())
            }
        };
        let (a, d) = cancel(&self.num, &rhs.den);
        let (c, b) = cancel(&rhs.num, &self.den);
        RatFunc::scaled(&a * &c, &b * &d)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat};

    fn tv() -> Vars {
        Vars::bi("t", "v")
    }

    fn rf(vars: &Vars, n: &str, d: &str) -> RatFunc {
        RatFunc::parse(vars, n, d).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let f = rf(&tv(), "t^2 - v^2", "t - v");
        assert!(f.is_polynomial());
        assert_eq!(f.num(), &Poly::parse(&tv(), "t + v").unwrap());
        assert_eq!(f.den(), &Poly::one(&tv()));

        let g = rf(&tv(), "2*t", "4");
        assert_eq!(g.num(), &Poly::parse(&tv(), "1/2*t").unwrap());
        assert_eq!(g.den(), &Poly::one(&tv()));
    }

    #[test]
    fn normalize_rejects_zero_denominator() {
        let r = RatFunc::normalize(Poly::one(&tv()), Poly::zero(&tv()));
        assert_eq!(r.unwrap_err(), Error::ZeroDenominator);
    }

    #[test]
    fn denominator_sign_convention() {
        // least term of the denominator is the constant -1 before normalizing
        let f = rf(&tv(), "1", "t - 1");
        assert_eq!(f.den(), &Poly::parse(&tv(), "1 - t").unwrap());
        assert_eq!(f.num(), &Poly::parse(&tv(), "-1").unwrap());
        // no constant term: the least term is v (total degree 1, t-degree 0)
        let g = rf(&tv(), "1", "t - v");
        assert_eq!(g.den(), &Poly::parse(&tv(), "v - t").unwrap());
    }

    #[test]
    fn normalize_is_idempotent_and_structural() {
        let f = rf(&tv(), "3*t^2 - 3", "6*t^2 - 12*t + 6");
        let again = RatFunc::normalize(f.num().clone(), f.den().clone()).unwrap();
        assert_eq!(f.num(), again.num());
        assert_eq!(f.den(), again.den());
        assert_eq!(f, rf(&tv(), "t + 1", "2*t - 2"));
    }

    #[test]
    fn arithmetic() {
        let vars = Vars::uni("v");
        let a = rf(&vars, "1", "1 - v");
        let b = rf(&vars, "1", "1 + v");
        let sum = &a + &b;
        assert_eq!(sum, rf(&vars, "2", "1 - v^2"));
        let half_sum = sum.scale(&rat(1, 2));
        assert_eq!(half_sum, rf(&vars, "1", "1 - v^2"));
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(&(&a - &b) + &b, a);
        assert!(RatFunc::zero(&vars).recip().is_err());
    }

    #[test]
    fn substitution_examples() {
        let v = Vars::uni("v");
        let f = RatFunc::parse(&Vars::uni("t"), "1", "1 - t").unwrap();
        let v_of_t = RatFunc::var(&v, "v").unwrap();
        assert_eq!(f.substitute(&[("t", &v_of_t)]).unwrap(), rf(&v, "1", "1 - v"));

        let xy = Vars::bi("x", "y");
        let g = rf(&tv(), "1", "1 - t^2 - v^2 + t^2*v^2");
        let x = RatFunc::var(&xy, "x").unwrap();
        let prod = RatFunc::from_poly(Poly::parse(&xy, "x*y").unwrap());
        let out = g.substitute(&[("t", &x), ("v", &prod)]).unwrap();
        assert_eq!(out, rf(&xy, "1", "1 - x^2 - x^2*y^2 + x^4*y^2"));
    }

    #[test]
    fn substitution_errors() {
        let f = rf(&tv(), "1", "1 - t");
        let one = RatFunc::one(&tv());
        assert!(matches!(f.substitute(&[("t", &one)]), Err(Error::Domain(_))));
        assert!(matches!(f.substitute(&[("z", &one)]), Err(Error::Variables(_))));
        let uni = RatFunc::one(&Vars::uni("s"));
        // v is unbound and absent from the target
        assert!(matches!(f.substitute(&[("t", &uni)]), Err(Error::Variables(_))));
    }

    #[test]
    fn evaluation() {
        let f = rf(&Vars::uni("v"), "1", "2 - 2*v");
        assert_eq!(f.eval(&[int(0)]).unwrap(), rat(1, 2));
        assert!(f.eval(&[int(1)]).is_err());
    }
}
