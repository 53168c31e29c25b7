//! Sparse polynomials in one or two named variables over the rationals.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::rational::{format_rational, parse_rational};
use crate::error::{Error, Result};

/// Ordered list of one or two distinct variable names.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vars(Vec<String>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        match names.len() {
            1 => {}
            2 if names[0] != names[1] => {}
            2 => return Err(Error::Variables(format!("repeated variable {:?}", names[0]))),
            n => return Err(Error::Variables(format!("expected 1 or 2 variables, got {n}"))),
        }
        if names.iter().any(|n| n.is_empty() || !n.chars().all(char::is_alphanumeric)) {
            return Err(Error::Variables(format!("invalid variable names {names:?}")));
        }
        Ok(Vars(names))
    }

    /// Single variable. Panics on an invalid name.
    pub fn uni(a: &str) -> Self {
        Vars::new(&[a]).expect("valid variable name")
    }

    /// Two variables. Panics on invalid or repeated names.
    pub fn bi(a: &str, b: &str) -> Self {
        Vars::new(&[a, b]).expect("valid variable names")
    }

    /// Number of nonzero terms; `is_zero` is the emptiness test.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

impl fmt::Display for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.join(","))
    }
}

/// Exponent vector; the second slot is always zero for univariate polynomials.
pub type Exps = [u32; 2];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    vars: Vars,
    terms: BTreeMap<Exps, BigRational>,
}

impl Poly {
    pub fn zero(vars: &Vars) -> Self {
        Poly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, BigRational::one())
    }

    pub fn constant(vars: &Vars, c: BigRational) -> Self {
        Self::monomial(vars, [0, 0], c)
    }

    pub fn monomial(vars: &Vars, exps: Exps, c: BigRational) -> Self {
        assert!(vars.len() == 2 || exps[1] == 0, "exponent on missing variable");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { vars: vars.clone(), terms }
    }

    pub fn var(vars: &Vars, name: &str) -> Result<Self> {
        let idx = vars
            .index(name)
            .ok_or_else(|| Error::Variables(format!("{name} not in {vars}")))?;
        let mut e = [0, 0];
        e[idx] = 1;
        Ok(Self::monomial(vars, e, BigRational::one()))
    }

    pub fn from_terms<I>(vars: &Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exps, BigRational)>,
    {
        let mut p = Poly::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Univariate polynomial from ascending integer coefficients.
    pub fn from_coeffs(vars: &Vars, coeffs: &[i64]) -> Self {
        assert_eq!(vars.len(), 1, "from_coeffs needs a single variable");
        Self::from_terms(
            vars,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| ([k as u32, 0], BigRational::from_integer(c.into()))),
        )
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exps, &BigRational)> + '_ {
        self.terms.iter()
    }

    /// Number of nonzero terms; `is_zero` is the emptiness test.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| *e == [0, 0])
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn coeff(&self, exps: Exps) -> BigRational {
        self.terms.get(&exps).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff([0, 0])
    }

    /// Degree in the variable at `idx`; `None` for the zero polynomial.
    pub fn degree_in(&self, idx: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[idx]).max()
    }

    pub fn degree_of(&self, name: &str) -> Option<u32> {
        match self.vars.index(name) {
            Some(i) => self.degree_in(i),
            None if self.is_zero() => None,
            None => Some(0),
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e[0] + e[1]).max()
    }

    /// Leading term in lex order with the first variable highest.
    pub fn leading(&self) -> Option<(&Exps, &BigRational)> {
        self.terms.last_key_value()
    }

    /// Least term ordered by total degree, then degree in the first variable.
    pub fn least_term(&self) -> Option<(&Exps, &BigRational)> {
        self.terms.iter().min_by_key(|(e, _)| (e[0] + e[1], e[0]))
    }

    pub(crate) fn add_term(&mut self, e: Exps, c: BigRational) {
        if c.is_zero() {
            return;
        }
        debug_assert!(self.vars.len() == 2 || e[1] == 0);
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, exps: Exps, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, v)| ([e[0] + exps[0], e[1] + exps[1]], v * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(&self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        self.check_vars(divisor);
        let (ld, lc) = divisor.leading().map(|(e, c)| (*e, c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.vars);
        while let Some((e, c)) = rem.leading().map(|(e, c)| (*e, c.clone())) {
            if e[0] < ld[0] || e[1] < ld[1] {
                return None;
            }
            let qe = [e[0] - ld[0], e[1] - ld[1]];
            let qc = c / &lc;
            for (de, dc) in divisor.terms.iter() {
                rem.add_term([de[0] + qe[0], de[1] + qe[1]], -(dc * &qc));
            }
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// Re-expresses the polynomial over `target`, matching variables by name.
    pub fn embed(&self, target: &Vars) -> Result<Poly> {
        if &self.vars == target {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self.vars.names().iter().map(|n| target.index(n)).collect();
        let mut out = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut ne = [0u32, 0];
            for (k, slot) in map.iter().enumerate() {
                if e[k] == 0 {
                    continue;
                }
                match slot {
                    Some(i) => ne[*i] += e[k],
                    None => {
                        return Err(Error::Variables(format!(
                            "{} does not occur in {target}",
                            self.vars.names()[k]
                        )))
                    }
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Evaluation at a point given in variable order.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.vars.len(), "point dimension");
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (k, x) in point.iter().enumerate() {
                term *= num_traits::pow(x.clone(), e[k] as usize);
            }
            acc += term;
        }
        acc
    }

    /// Coefficients of the univariate polynomial obtained by reading the
    /// variable at `idx` as main variable: entry `k` collects all terms with
    /// that exponent equal to `k`, as a polynomial in the remaining variable.
    pub fn coeffs_in(&self, idx: usize) -> Vec<Poly> {
        let other_vars = if self.vars.len() == 2 {
            Vars::uni(&self.vars.names()[1 - idx])
        } else {
            self.vars.clone()
        };
        let deg = self.degree_in(idx).unwrap_or(0) as usize;
        let mut out = vec![Poly::zero(&other_vars); deg + 1];
        for (e, c) in &self.terms {
            let rest = if self.vars.len() == 2 { e[1 - idx] } else { 0 };
            out[e[idx] as usize].add_term([rest, 0], c.clone());
        }
        out
    }

    /// Parses sums of monomials such as `3/4*t^2*v - v + 2`.
    pub fn parse(vars: &Vars, src: &str) -> Result<Poly> {
        let cleaned: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut out = Poly::zero(vars);
        let mut chunks = Vec::new();
        let mut start = 0;
        let bytes = cleaned.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                chunks.push(&cleaned[start..i]);
                start = i;
            }
        }
        chunks.push(&cleaned[start..]);
        for chunk in chunks {
            let (neg, body) = match chunk.as_bytes()[0] {
                b'-' => (true, &chunk[1..]),
                b'+' => (false, &chunk[1..]),
                _ => (false, chunk),
            };
            if body.is_empty() {
                return Err(Error::Parse(format!("dangling sign in {src:?}")));
            }
            let mut coeff = BigRational::one();
            let mut exps = [0u32, 0];
            for factor in body.split('*') {
                let starts_numeric = factor.chars().next().is_some_and(|c| c.is_ascii_digit());
                if starts_numeric {
                    coeff *= parse_rational(factor)?;
                    continue;
                }
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (
                        n,
                        e.parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?,
                    ),
                    None => (factor, 1),
                };
                let idx = vars
                    .index(name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable {name:?} for {vars}")))?;
                exps[idx] += exp;
            }
            if neg {
                coeff = -coeff;
            }
            out.add_term(exps, coeff);
        }
        Ok(out)
    }

    fn check_vars(&self, other: &Poly) {
        assert_eq!(
            self.vars, other.vars,
            "polynomial arithmetic over different variable lists"
        );
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut parts = Vec::new();
            if !mag.is_one() || *e == [0, 0] {
                parts.push(format_rational(&mag));
            }
            for (i, name) in self.vars.names().iter().enumerate() {
                match e[i] {
                    0 => {}
                    1 => parts.push(name.clone()),
                    n => parts.push(format!("{name}^{n}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check_vars(rhs);
        let mut out = Poly::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1]], ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// JSON record for one term: exponents in variable order and a `p/q` string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: Vec<u32>,
    #[serde(with = "super::rational::serde_str")]
    pub coefficient: BigRational,
}

/// Serialized polynomial: variable names plus terms sorted by exponent tuple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub variables: Vec<String>,
    pub terms: Vec<TermRecord>,
}

impl From<&Poly> for PolyRecord {
    fn from(p: &Poly) -> Self {
        let n = p.vars.len();
        PolyRecord {
            variables: p.vars.names().to_vec(),
            terms: p
                .terms
                .iter()
                .map(|(e, c)| TermRecord { exponents: e[..n].to_vec(), coefficient: c.clone() })
                .collect(),
        }
    }
}

impl TryFrom<PolyRecord> for Poly {
    type Error = Error;
    fn try_from(r: PolyRecord) -> Result<Poly> {
        let vars = Vars::new(&r.variables)?;
        let mut p = Poly::zero(&vars);
        for t in r.terms {
            if t.exponents.len() != vars.len() {
                return Err(Error::Parse("exponent arity does not match variables".into()));
            }
            let mut e = [0, 0];
            e[..vars.len()].copy_from_slice(&t.exponents);
            p.add_term(e, t.coefficient);
        }
        Ok(p)
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PolyRecord::deserialize(d)?;
        Poly::try_from(r).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat};

    fn tv() -> Vars {
        Vars::bi("t", "v")
    }

    #[test]
    fn parse_and_display_agree() {
        let p = Poly::parse(&tv(), "3/4*t^2*v - v + 2 - t").unwrap();
        assert_eq!(p.coeff([2, 1]), rat(3, 4));
        assert_eq!(p.coeff([0, 1]), int(-1));
        assert_eq!(p.coeff([1, 0]), int(-1));
        assert_eq!(p.constant_term(), int(2));
        let again = Poly::parse(&tv(), &p.to_string()).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn parse_rejects_unknown_variable() {
        assert!(matches!(Poly::parse(&tv(), "x+1"), Err(Error::Parse(_))));
        assert!(Poly::parse(&tv(), "").is_err());
        assert!(Poly::parse(&tv(), "t+-").is_err());
    }

    #[test]
    fn zero_terms_are_dropped() {
        let p = Poly::parse(&tv(), "t - t + v").unwrap();
        assert_eq!(p.len(), 1);
        let z = &p - &p;
        assert!(z.is_zero());
    }

    #[test]
    fn exact_division() {
        let vars = tv();
        let a = Poly::parse(&vars, "t^2 - v^2").unwrap();
        let b = Poly::parse(&vars, "t - v").unwrap();
        assert_eq!(a.div_exact(&b).unwrap(), Poly::parse(&vars, "t + v").unwrap());
        let c = Poly::parse(&vars, "t^2 + v^2").unwrap();
        assert!(c.div_exact(&b).is_none());
    }

    #[test]
    fn embed_reorders_by_name() {
        let p = Poly::parse(&Vars::uni("v"), "v^3 + 2").unwrap();
        let q = p.embed(&tv()).unwrap();
        assert_eq!(q.coeff([0, 3]), int(1));
        let swapped = Poly::parse(&tv(), "t*v^2").unwrap().embed(&Vars::bi("v", "t")).unwrap();
        assert_eq!(swapped.coeff([2, 1]), int(1));
        assert!(Poly::parse(&tv(), "t").unwrap().embed(&Vars::uni("v")).is_err());
    }

    #[test]
    fn pow_and_eval() {
        let p = Poly::parse(&tv(), "1 - t*v").unwrap();
        let cube = p.pow(3);
        assert_eq!(cube.coeff([2, 2]), int(3));
        assert_eq!(cube.eval(&[int(2), rat(1, 2)]), int(0));
    }

    #[test]
    fn json_round_trip() {
        let p = Poly::parse(&tv(), "-5/3*t*v^2 + 7").unwrap();
        let js = serde_json::to_string(&p).unwrap();
        assert!(js.contains("\"-5/3\""));
        let back: Poly = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
    }
}
