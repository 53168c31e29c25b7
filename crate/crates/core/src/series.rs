//! Truncated bivariate power series, Schur functions in two variables, and
//! the brute-force multiplicity oracle.
//!
//! The oracle expands the Hilbert series of the mixed trace algebra of two
//! generic 3x3 matrices factor by factor and reads multiplicities off with
//! `m(l1, l2) = a(l1, l2) - a(l1 + 1, l2 - 1)`. It never touches the
//! multiplicity-series closed forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::rational::{format_rational, parse_rational};
use crate::exactalg::{Exps, Poly, RatFunc, Vars};

/// A partition with at most two parts, `lambda1 >= lambda2 >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partition2 {
    lambda1: u64,
    lambda2: u64,
}

impl Partition2 {
    pub fn new(lambda1: u64, lambda2: u64) -> Result<Self> {
        if lambda1 < lambda2 {
            return Err(Error::Usage(format!(
                "not a partition: lambda1 = {lambda1} < lambda2 = {lambda2}"
            )));
        }
        Ok(Partition2 { lambda1, lambda2 })
    }

    /// The partition `(p + q, q)`.
    pub fn from_pq(p: u64, q: u64) -> Self {
        Partition2 { lambda1: p + q, lambda2: q }
    }

    pub fn lambda1(&self) -> u64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> u64 {
        self.lambda2
    }

    /// `lambda1 - lambda2`.
    pub fn p(&self) -> u64 {
        self.lambda1 - self.lambda2
    }

    pub fn degree(&self) -> u64 {
        self.lambda1 + self.lambda2
    }

    /// All partitions of total size at most `n`, sorted by `(size, lambda1)`.
    pub fn up_to(n: u64) -> Vec<Partition2> {
        let mut out = Vec::new();
        for k in 0..=n {
            for l2 in (0..=k / 2).rev() {
                out.push(Partition2 { lambda1: k - l2, lambda2: l2 });
            }
        }
        out
    }
}

impl fmt::Display for Partition2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lambda1, self.lambda2)
    }
}

/// Power series in two variables truncated at total degree `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries2 {
    vars: Vars,
    n: u32,
    coeffs: BTreeMap<(u32, u32), BigRational>,
}

fn xy() -> Vars {
    Vars::bi("x", "y")
}

/// Dense triangle `grid[i][j]` for `i + j <= n`.
type Grid = Vec<Vec<BigRational>>;

fn grid_zero(n: u32) -> Grid {
    (0..=n).map(|i| vec![BigRational::zero(); (n - i + 1) as usize]).collect()
}

impl TruncSeries2 {
    pub fn zero(vars: &Vars, n: u32) -> Self {
        assert_eq!(vars.len(), 2, "bivariate series");
        TruncSeries2 { vars: vars.clone(), n, coeffs: BTreeMap::new() }
    }

    pub fn one(vars: &Vars, n: u32) -> Self {
        let mut s = Self::zero(vars, n);
        s.coeffs.insert((0, 0), BigRational::one());
        s
    }

    /// Drops every term of total degree above `n`.
    pub fn from_poly(p: &Poly, n: u32) -> Self {
        let vars = if p.vars().len() == 2 { p.vars().clone() } else { xy() };
        let mut s = Self::zero(&vars, n);
        for (e, c) in p.terms() {
            if e[0] + e[1] <= n {
                s.coeffs.insert((e[0], e[1]), c.clone());
            }
        }
        s
    }

    /// Terms beyond total degree `n` and zero coefficients are dropped.
    pub fn from_terms<I>(vars: &Vars, n: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), BigRational)>,
    {
        let mut s = Self::zero(vars, n);
        for ((i, j), c) in terms {
            if i + j <= n && !c.is_zero() {
                *s.coeffs.entry((i, j)).or_insert_with(BigRational::zero) += c;
            }
        }
        s.coeffs.retain(|_, c| !c.is_zero());
        s
    }

    fn from_grid(vars: &Vars, n: u32, grid: Grid) -> Self {
        let mut s = Self::zero(vars, n);
        for (i, row) in grid.into_iter().enumerate() {
            for (j, c) in row.into_iter().enumerate() {
                if !c.is_zero() {
                    s.coeffs.insert((i as u32, j as u32), c);
                }
            }
        }
        s
    }

    fn to_grid(&self) -> Grid {
        let mut g = grid_zero(self.n);
        for (&(i, j), c) in &self.coeffs {
            g[i as usize][j as usize] = c.clone();
        }
        g
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn truncation(&self) -> u32 {
        self.n
    }

    /// Nonzero terms in `(i, j)` lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &BigRational)> + '_ {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Coefficient of `x^i y^j`; asking beyond the truncation is an error.
    pub fn coeff(&self, i: u32, j: u32) -> Result<BigRational> {
        if i + j > self.n {
            return Err(Error::OutOfTruncation { i, j, n: self.n });
        }
        Ok(self.coeffs.get(&(i, j)).cloned().unwrap_or_else(BigRational::zero))
    }

    pub fn truncate(&self, n: u32) -> Self {
        let n = n.min(self.n);
        TruncSeries2 {
            vars: self.vars.clone(),
            n,
            coeffs: self
                .coeffs
                .iter()
                .filter(|((i, j), _)| i + j <= n)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        assert_eq!(self.vars, other.vars, "series over different variables");
        let n = self.n.min(other.n);
        let a = self.truncate(n);
        let b = other.truncate(n);
        let mut out = Self::zero(&self.vars, n);
        let zero = BigRational::zero();
        let keys: std::collections::BTreeSet<_> = a.coeffs.keys().chain(b.coeffs.keys()).collect();
        for k in keys {
            let c = op(a.coeffs.get(k).unwrap_or(&zero), b.coeffs.get(k).unwrap_or(&zero));
            if !c.is_zero() {
                out.coeffs.insert(*k, c);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(&self.vars, self.n);
        if !c.is_zero() {
            out.coeffs = self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect();
        }
        out
    }

    /// Product truncated at the smaller of the two truncation degrees.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars, "series over different variables");
        let n = self.n.min(other.n);
        let mut grid = grid_zero(n);
        for (&(i, j), a) in &self.coeffs {
            for (&(k, l), b) in &other.coeffs {
                if i + j + k + l <= n {
                    grid[(i + k) as usize][(j + l) as usize] += a * b;
                }
            }
        }
        Self::from_grid(&self.vars, n, grid)
    }

    /// Multiplies in place by `1 / (1 - x^a y^b)`.
    pub fn mul_geometric(&mut self, m: Exps) {
        assert!(m != [0, 0], "1/(1-1) has no expansion");
        let n = self.n;
        let mut g = self.to_grid();
        // lex order visits (i-a, j-b) before (i, j)
        for i in 0..=n {
            for j in 0..=(n - i) {
                if i >= m[0] && j >= m[1] {
                    let prev = g[(i - m[0]) as usize][(j - m[1]) as usize].clone();
                    if !prev.is_zero() {
                        g[i as usize][j as usize] += prev;
                    }
                }
            }
        }
        *self = Self::from_grid(&self.vars, n, g);
    }

    pub fn is_symmetric(&self) -> bool {
        self.coeffs
            .iter()
            .all(|(&(i, j), c)| self.coeffs.get(&(j, i)) == Some(c))
    }

    /// The polynomial of all retained terms.
    pub fn to_poly(&self) -> Poly {
        Poly::from_terms(&self.vars, self.coeffs.iter().map(|(&(i, j), c)| ([i, j], c.clone())))
    }
}

/// JSON form: `{"N": n, "terms": [[i, j, "p/q"], ...]}` sorted by `(i + j, i)`.
#[derive(Serialize, Deserialize)]
struct SeriesRecord {
    #[serde(rename = "N")]
    n: u32,
    terms: Vec<(u32, u32, String)>,
}

impl Serialize for TruncSeries2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut terms: Vec<_> = self
            .coeffs
            .iter()
            .map(|(&(i, j), c)| (i, j, format_rational(c)))
            .collect();
        terms.sort_by_key(|(i, j, _)| (i + j, *i));
        SeriesRecord { n: self.n, terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncSeries2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = SeriesRecord::deserialize(d)?;
        let mut s = TruncSeries2::zero(&xy(), r.n);
        for (i, j, c) in r.terms {
            if i + j > r.n {
                return Err(D::Error::custom(format!("term ({i},{j}) beyond N = {}", r.n)));
            }
            let c = parse_rational(&c).map_err(D::Error::custom)?;
            if !c.is_zero() {
                s.coeffs.insert((i, j), c);
            }
        }
        Ok(s)
    }
}

/// Exponents and multiplicities of the factors `(1 - x^a y^b)^-k` whose
/// product is the Hilbert series of the mixed trace algebra `T_2` of two
/// generic 3x3 matrices.
pub const HILBERT_T2_FACTORS: [(Exps, u32); 7] = [
    ([1, 0], 2),
    ([0, 1], 2),
    ([2, 0], 1),
    ([0, 2], 1),
    ([1, 1], 2),
    ([2, 1], 1),
    ([1, 2], 1),
];

/// `1/((1-x)^2 (1-y)^2 (1-x^2)(1-y^2)(1-xy)^2 (1-x^2 y)(1-xy^2))`.
pub fn hilbert_t2() -> RatFunc {
    let vars = xy();
    let one = Poly::one(&vars);
    let den = HILBERT_T2_FACTORS.iter().fold(one.clone(), |acc, (m, k)| {
        let factor = &one - &Poly::monomial(&vars, *m, BigRational::one());
        &acc * &factor.pow(*k)
    });
    RatFunc::normalize(one, den).expect("nonzero denominator")
}

/// Maclaurin expansion of `f` through total degree `n`.
pub fn expand(f: &RatFunc, n: u32) -> Result<TruncSeries2> {
    let c0 = f.den().constant_term();
    if c0.is_zero() {
        return Err(Error::NotExpandable);
    }
    let vars = if f.vars().len() == 2 { f.vars().clone() } else { xy() };
    let inv0 = c0.recip();
    let den: Vec<(Exps, BigRational)> = f
        .den()
        .terms()
        .filter(|(e, _)| **e != [0, 0])
        .map(|(e, c)| (*e, c.clone()))
        .collect();
    let mut g = grid_zero(n);
    for (e, c) in f.num().terms() {
        if e[0] + e[1] <= n {
            g[e[0] as usize][e[1] as usize] = c.clone();
        }
    }
    for i in 0..=n {
        for j in 0..=(n - i) {
            let mut acc = std::mem::take(&mut g[i as usize][j as usize]);
            for (e, c) in &den {
                if e[0] <= i && e[1] <= j {
                    let prev = &g[(i - e[0]) as usize][(j - e[1]) as usize];
                    if !prev.is_zero() {
                        acc -= c * prev;
                    }
                }
            }
            g[i as usize][j as usize] = acc * &inv0;
        }
    }
    Ok(TruncSeries2::from_grid(&vars, n, g))
}

/// Coefficients `c[i][j]` of the expansion of `f` for `i <= p`, `j <= q`.
pub fn expand_rect(f: &RatFunc, p: u32, q: u32) -> Result<Vec<Vec<BigRational>>> {
    let c0 = f.den().constant_term();
    if c0.is_zero() {
        return Err(Error::NotExpandable);
    }
    if f.vars().len() != 2 {
        return Err(Error::Variables(format!("expected two variables, got {}", f.vars())));
    }
    let inv0 = c0.recip();
    let den: Vec<(Exps, BigRational)> = f
        .den()
        .terms()
        .filter(|(e, _)| **e != [0, 0])
        .map(|(e, c)| (*e, c.clone()))
        .collect();
    let mut g = vec![vec![BigRational::zero(); q as usize + 1]; p as usize + 1];
    for (e, c) in f.num().terms() {
        if e[0] <= p && e[1] <= q {
            g[e[0] as usize][e[1] as usize] = c.clone();
        }
    }
    for i in 0..=p as usize {
        for j in 0..=q as usize {
            let mut acc = std::mem::take(&mut g[i][j]);
            for (e, c) in &den {
                let (a, b) = (e[0] as usize, e[1] as usize);
                if a <= i && b <= j && !g[i - a][j - b].is_zero() {
                    acc -= c * &g[i - a][j - b];
                }
            }
            g[i][j] = acc * &inv0;
        }
    }
    Ok(g)
}

/// Expansion of a product of geometric factors `prod (1 - x^a y^b)^-k`.
pub fn expand_geometric_product(factors: &[(Exps, u32)], n: u32) -> TruncSeries2 {
    let mut s = TruncSeries2::one(&xy(), n);
    for (m, k) in factors {
        for _ in 0..*k {
            s.mul_geometric(*m);
        }
    }
    s
}

/// Schur function `S_lambda(x, y) = (xy)^l2 (x^p + x^(p-1) y + ... + y^p)`.
pub fn schur(lambda: Partition2, n: u32) -> TruncSeries2 {
    let mut s = TruncSeries2::zero(&xy(), n);
    if lambda.degree() > n as u64 {
        return s;
    }
    let l2 = lambda.lambda2() as u32;
    let p = lambda.p() as u32;
    for k in 0..=p {
        s.coeffs.insert((l2 + p - k, l2 + k), BigRational::one());
    }
    s
}

/// Multiplicity of `S_lambda` in a symmetric series.
pub fn schur_multiplicity(s: &TruncSeries2, lambda: Partition2) -> Result<BigRational> {
    if !s.is_symmetric() {
        return Err(Error::Domain("series is not symmetric in its two variables".into()));
    }
    let (l1, l2) = (to_u32(lambda.lambda1())?, to_u32(lambda.lambda2())?);
    let a = s.coeff(l1, l2)?;
    if l2 == 0 {
        return Ok(a);
    }
    Ok(a - s.coeff(l1 + 1, l2 - 1)?)
}

fn to_u32(x: u64) -> Result<u32> {
    u32::try_from(x).map_err(|_| Error::Usage(format!("{x} exceeds the series index range")))
}

fn to_integer(r: BigRational, lambda: Partition2) -> BigInt {
    assert!(
        r.is_integer() && !r.is_negative(),
        "oracle value {r} at {lambda} is not a non-negative integer"
    );
    r.to_integer()
}

/// `m_lambda(T)` by brute-force expansion of the Hilbert series.
pub fn oracle_multiplicity(lambda: Partition2) -> BigInt {
    let n = to_u32(lambda.degree()).expect("degree fits in u32");
    let s = expand_geometric_product(&HILBERT_T2_FACTORS, n);
    let m = schur_multiplicity(&s, lambda).expect("symmetric series, sufficient truncation");
    to_integer(m, lambda)
}

/// Oracle values for every partition of size at most `n`, from one
/// expansion, in `Partition2::up_to` order.
pub fn oracle_table(n: u32) -> Vec<(Partition2, BigInt)> {
    let s = expand_geometric_product(&HILBERT_T2_FACTORS, n);
    Partition2::up_to(n as u64)
        .into_iter()
        .map(|l| {
            let m = schur_multiplicity(&s, l).expect("symmetric series, sufficient truncation");
            (l, to_integer(m, l))
        })
        .collect()
}

pub fn is_symmetric(s: &TruncSeries2) -> bool {
    s.is_symmetric()
}
