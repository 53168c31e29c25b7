//! Partial fractions over the fixed pole sets that occur in the multiplicity
//! series: poles linear in `t` with coefficients in `Q(v)`, and powers of
//! `1 - v`, `1 + v`, `1 + v^2` in one variable.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

use super::poly::{Poly, Vars};
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

/// Factors linear in `t`, each of the form `1 - r(v) t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TFactor {
    OneMinusT,
    OnePlusT,
    OneMinusVT,
}

impl TFactor {
    pub fn poly(self, tv: &Vars) -> Poly {
        let src = match self {
            TFactor::OneMinusT => "1 - t",
            TFactor::OnePlusT => "1 + t",
            TFactor::OneMinusVT => "1 - t*v",
        };
        Poly::parse(tv, src).expect("static factor")
    }

    /// `r(v)` with `self = 1 - r t`.
    fn rate(self, v: &Vars) -> RatFunc {
        match self {
            TFactor::OneMinusT => RatFunc::one(v),
            TFactor::OnePlusT => RatFunc::constant(v, -BigRational::one()),
            TFactor::OneMinusVT => RatFunc::var(v, "v").expect("v"),
        }
    }
}

impl fmt::Display for TFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TFactor::OneMinusT => "(1-t)",
            TFactor::OnePlusT => "(1+t)",
            TFactor::OneMinusVT => "(1-vt)",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PoleT {
    pub factor: TFactor,
    pub power: u32,
}

/// `f = sum numerator(v) / pole(t, v)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartialFractionT {
    pub terms: Vec<(PoleT, RatFunc)>,
}

fn tv_vars() -> Vars {
    Vars::bi("t", "v")
}

fn v_vars() -> Vars {
    Vars::uni("v")
}

impl PartialFractionT {
    pub fn numerator(&self, factor: TFactor, power: u32) -> Option<&RatFunc> {
        self.terms
            .iter()
            .find(|(p, _)| p.factor == factor && p.power == power)
            .map(|(_, n)| n)
    }

    /// Sum of all terms over the common denominator.
    pub fn recombine(&self) -> RatFunc {
        let tv = tv_vars();
        let mut acc = RatFunc::zero(&tv);
        for (pole, numer) in &self.terms {
            let n = numer.embed(&tv).expect("numerators live in v");
            let d = RatFunc::from_poly(pole.factor.poly(&tv).pow(pole.power));
            acc = &acc + &(&n / &d);
        }
        acc
    }
}

impl fmt::Display for PartialFractionT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (pole, n)) in self.terms.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}^{}] {}", pole.factor, pole.power, n)?;
        }
        Ok(())
    }
}

/// Truncated power series in an auxiliary variable with `Q(v)` coefficients.
type KSeries = Vec<RatFunc>;

fn k_mul(a: &KSeries, b: &KSeries, order: usize) -> KSeries {
    let v = v_vars();
    let mut out = vec![RatFunc::zero(&v); order];
    for (i, x) in a.iter().enumerate().take(order) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order - i) {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

fn k_inv(a: &KSeries, order: usize) -> Result<KSeries> {
    let v = v_vars();
    let c0 = a[0].recip()?;
    let mut out = vec![RatFunc::zero(&v); order];
    out[0] = c0.clone();
    for n in 1..order {
        let mut acc = RatFunc::zero(&v);
        for k in 1..=n.min(a.len() - 1) {
            acc = &acc + &(&a[k] * &out[n - k]);
        }
        out[n] = -(&acc * &c0);
    }
    Ok(out)
}

fn k_pow(a: &KSeries, k: u32, order: usize) -> KSeries {
    let mut acc = vec![RatFunc::one(&v_vars())];
    for _ in 0..k {
        acc = k_mul(&acc, a, order);
    }
    acc
}

/// Decomposes `f(t, v)` over the supplied linear factors in `t`.
///
/// The denominator of `f` must equal the product of the factors (with
/// multiplicities) times a polynomial free of `t`, and the numerator must have
/// lower `t`-degree than that product.
pub fn partial_fractions_t(f: &RatFunc, factors: &[(TFactor, u32)]) -> Result<PartialFractionT> {
    let tv = tv_vars();
    let v = v_vars();
    if f.vars() != &tv {
        return Err(Error::Variables(format!("expected (t,v), got {}", f.vars())));
    }
    for (i, (a, _)) in factors.iter().enumerate() {
        if factors[..i].iter().any(|(b, _)| b == a) {
            return Err(Error::Usage(format!("factor {a} listed twice")));
        }
    }
    let product = factors
        .iter()
        .fold(Poly::one(&tv), |acc, (fac, m)| &acc * &fac.poly(&tv).pow(*m));
    let cofactor = f.den().div_exact(&product).ok_or_else(|| {
        Error::Factorization("supplied factors do not divide the denominator".into())
    })?;
    if cofactor.degree_in(0).unwrap_or(0) > 0 {
        return Err(Error::Factorization(
            "denominator has factors in t beyond those supplied".into(),
        ));
    }
    let total: u32 = factors.iter().map(|(_, m)| m).sum();
    if f.num().degree_in(0).unwrap_or(0) >= total {
        return Err(Error::Domain("numerator degree in t is not below the pole order".into()));
    }
    let cofactor = RatFunc::from_poly(cofactor.embed(&v)?);
    let numer: Vec<RatFunc> = f
        .num()
        .coeffs_in(0)
        .into_iter()
        .map(|c| RatFunc::from_poly(c.embed(&v).expect("v only")))
        .collect();

    let mut terms = Vec::new();
    for (i, (fac, m)) in factors.iter().enumerate() {
        let order = *m as usize;
        if order == 0 {
            continue;
        }
        // u = 1 - r t, so t = (1 - u) / r
        let r = fac.rate(&v);
        let r_inv = r.recip()?;
        let t_of_u: KSeries = vec![r_inv.clone(), -&r_inv];
        let mut num_u = vec![RatFunc::zero(&v); order];
        let mut t_pow = vec![RatFunc::one(&v)];
        for n_k in &numer {
            for (j, c) in t_pow.iter().enumerate() {
                num_u[j] = &num_u[j] + &(n_k * c);
            }
            t_pow = k_mul(&t_pow, &t_of_u, order);
        }
        let mut rest: KSeries = vec![RatFunc::one(&v)];
        for (j, (other, mj)) in factors.iter().enumerate() {
            if j == i {
                continue;
            }
            // 1 - r_j t = (1 - r_j/r) + (r_j/r) u
            let ratio = &other.rate(&v) * &r_inv;
            let lin: KSeries = vec![&RatFunc::one(&v) - &ratio, ratio];
            rest = k_mul(&rest, &k_pow(&lin, *mj, order), order);
        }
        let g = k_mul(&num_u, &k_inv(&rest, order)?, order);
        for (k, gk) in g.into_iter().enumerate() {
            let gk = &gk / &cofactor;
            if !gk.is_zero() {
                terms.push((PoleT { factor: *fac, power: (order - k) as u32 }, gk));
            }
        }
    }
    Ok(PartialFractionT { terms })
}

/// Basis elements of the one-variable decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum VBasis {
    /// `(1 - v)^-k`
    OneMinusV(u32),
    /// `(1 + v)^-k`
    OnePlusV(u32),
    /// `1 / (1 + v^2)`
    InvOnePlusV2,
    /// `v / (1 + v^2)`
    VOverOnePlusV2,
}

impl VBasis {
    fn parts(self, vars: &Vars) -> (Poly, Poly) {
        let p = |s: &str| Poly::parse(vars, &s.replace('v', &vars.names()[0])).expect("static");
        match self {
            VBasis::OneMinusV(k) => (p("1"), p("1 - v").pow(k)),
            VBasis::OnePlusV(k) => (p("1"), p("1 + v").pow(k)),
            VBasis::InvOnePlusV2 => (p("1"), p("1 + v^2")),
            VBasis::VOverOnePlusV2 => (p("v"), p("1 + v^2")),
        }
    }
}

impl fmt::Display for VBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VBasis::OneMinusV(k) => write!(f, "1/(1-v)^{k}"),
            VBasis::OnePlusV(k) => write!(f, "1/(1+v)^{k}"),
            VBasis::InvOnePlusV2 => write!(f, "1/(1+v^2)"),
            VBasis::VOverOnePlusV2 => write!(f, "v/(1+v^2)"),
        }
    }
}

/// `f = polynomial + sum coefficient * basis`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractionV {
    pub vars: Vars,
    pub coefficients: BTreeMap<VBasis, BigRational>,
    pub polynomial: Poly,
}

impl PartialFractionV {
    pub fn coeff(&self, b: VBasis) -> BigRational {
        self.coefficients.get(&b).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn recombine(&self) -> RatFunc {
        let mut acc = RatFunc::from_poly(self.polynomial.clone());
        for (b, c) in &self.coefficients {
            let (n, d) = b.parts(&self.vars);
            acc = &acc + &RatFunc::normalize(n.scale(c), d).expect("nonzero basis denominator");
        }
        acc
    }
}

impl fmt::Display for PartialFractionV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> =
            self.coefficients.iter().map(|(b, c)| format!("{c} * {b}")).collect();
        if !self.polynomial.is_zero() {
            parts.push(self.polynomial.to_string());
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Dense ascending coefficients of a univariate polynomial.
fn dense(p: &Poly) -> Vec<BigRational> {
    let n = p.degree_in(0).map_or(0, |d| d as usize + 1);
    let mut out = vec![BigRational::zero(); n];
    for (e, c) in p.terms() {
        out[e[0] as usize] = c.clone();
    }
    out
}

fn strip_factor(mut d: Poly, factor: &Poly) -> (Poly, u32) {
    let mut k = 0;
    while let Some(q) = d.div_exact(factor) {
        d = q;
        k += 1;
    }
    (d, k)
}

/// Gaussian elimination on a square system; `None` when singular.
fn solve(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        let pivot = a[col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for (x, y) in a[r][col..].iter_mut().zip(&pivot[col..]) {
                *x -= &f * y;
            }
            let delta = &f * &b[col];
            b[r] -= delta;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Decomposes a one-variable rational function whose denominator is a
/// product of powers of `1 - v`, `1 + v` and at most one `1 + v^2`.
pub fn partial_fractions_v(f: &RatFunc) -> Result<PartialFractionV> {
    let vars = f.vars().clone();
    if vars.len() != 1 {
        return Err(Error::Variables(format!("expected one variable, got {vars}")));
    }
    let name = vars.names()[0].clone();
    let p = |s: &str| Poly::parse(&vars, &s.replace('v', &name)).expect("static");

    let den = f.den().clone();
    let (rest, a) = strip_factor(den.clone(), &p("1 - v"));
    let (rest, b) = strip_factor(rest, &p("1 + v"));
    let (rest, c) = strip_factor(rest, &p("1 + v^2"));
    if !rest.is_constant() {
        return Err(Error::Factorization(format!(
            "denominator has a factor outside (1-v), (1+v), (1+v^2): {rest}"
        )));
    }
    if c > 1 {
        return Err(Error::Factorization("(1+v^2) occurs with multiplicity above one".into()));
    }

    // polynomial part by long division
    let n_deg = den.degree_in(0).unwrap_or(0) as usize;
    let mut rem = dense(f.num());
    let dd = dense(&den);
    let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(n_deg)];
    while rem.len() > n_deg {
        let k = rem.len() - 1 - n_deg;
        let q = rem.last().unwrap() / dd.last().unwrap();
        for (j, dj) in dd.iter().enumerate() {
            rem[k + j] -= &q * dj;
        }
        quot[k] = q;
        rem.pop();
    }
    rem.resize(n_deg, BigRational::zero());

    let mut basis = Vec::new();
    basis.extend((1..=a).map(VBasis::OneMinusV));
    basis.extend((1..=b).map(VBasis::OnePlusV));
    if c == 1 {
        basis.push(VBasis::InvOnePlusV2);
        basis.push(VBasis::VOverOnePlusV2);
    }
    debug_assert_eq!(basis.len(), n_deg);

    // column j: coefficients of den * basis_j
    let columns: Vec<Vec<BigRational>> = basis
        .iter()
        .map(|bj| {
            let (n, d) = bj.parts(&vars);
            let mut col = dense(&(&n * &den.div_exact(&d).expect("basis denominator divides")));
            col.resize(n_deg, BigRational::zero());
            col
        })
        .collect();
    let matrix: Vec<Vec<BigRational>> =
        (0..n_deg).map(|i| columns.iter().map(|col| col[i].clone()).collect()).collect();
    let sol = solve(matrix, rem)
        .ok_or_else(|| Error::Consistency("singular partial fraction system".into()))?;

    let coefficients = basis
        .into_iter()
        .zip(sol)
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let polynomial = Poly::from_terms(
        &vars,
        quot.into_iter().enumerate().map(|(k, c)| ([k as u32, 0], c)),
    );
    Ok(PartialFractionV { vars, coefficients, polynomial })
}
