//! Closed formulas for the multiplicities `m_(l1, l2)(T)` of the mixed trace
//! cocharacter of 3x3 matrices, their asymptotics, and two related formulas.
//!
//! Write `(l1, l2) = (p + q, q)`. The multiplicity series splits as
//!
//! ```text
//!   sum (a+_pq + (-1)^q a-_pq + (-1)^p b+_q + (-1)^(p+q) b-_q) t^p v^q
//! - 1/64 sum (-1)^(p+r) t^p v^(2r+1)
//! + sum (c+_s + (-1)^s c-_s) (tv)^p v^s
//! + 1/64 sum (-1)^w (tv)^p v^(2w)
//! ```
//!
//! and the coefficient of `t^p v^q` is the multiplicity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::constants::{BlockPoly, Catalog};
use crate::error::{Error, Result};
use crate::exactalg::Vars;
use crate::series::{Partition2, TruncSeries2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lemma3Kind {
    APlus,
    AMinus,
    BPlus,
    BMinus,
    CPlus,
    CMinus,
}

impl Lemma3Kind {
    pub const ALL: [Lemma3Kind; 6] = [
        Lemma3Kind::APlus,
        Lemma3Kind::AMinus,
        Lemma3Kind::BPlus,
        Lemma3Kind::BMinus,
        Lemma3Kind::CPlus,
        Lemma3Kind::CMinus,
    ];

    pub fn arity(self) -> usize {
        match self {
            Lemma3Kind::APlus | Lemma3Kind::AMinus => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Lemma3Kind::APlus => "a_plus",
            Lemma3Kind::AMinus => "a_minus",
            Lemma3Kind::BPlus => "b_plus",
            Lemma3Kind::BMinus => "b_minus",
            Lemma3Kind::CPlus => "c_plus",
            Lemma3Kind::CMinus => "c_minus",
        }
    }

    fn poly(self, cat: &Catalog) -> &BlockPoly {
        let l = &cat.lemma3;
        match self {
            Lemma3Kind::APlus => &l.a_plus,
            Lemma3Kind::AMinus => &l.a_minus,
            Lemma3Kind::BPlus => &l.b_plus,
            Lemma3Kind::BMinus => &l.b_minus,
            Lemma3Kind::CPlus => &l.c_plus,
            Lemma3Kind::CMinus => &l.c_minus,
        }
    }
}

impl std::str::FromStr for Lemma3Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Lemma3Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown coefficient kind {s:?}")))
    }
}

pub fn lemma3_coeff(kind: Lemma3Kind, args: &[u64]) -> Result<BigRational> {
    lemma3_coeff_with(Catalog::standard(), kind, args)
}

/// `a`-kinds take `(p, q)`; `b`-kinds take `q`; `c`-kinds take `s`.
pub fn lemma3_coeff_with(cat: &Catalog, kind: Lemma3Kind, args: &[u64]) -> Result<BigRational> {
    if args.len() != kind.arity() {
        return Err(Error::Usage(format!(
            "{} takes {} argument(s), got {}",
            kind.name(),
            kind.arity(),
            args.len()
        )));
    }
    let (p, q) = match args {
        [p, q] => (BigInt::from(*p), BigInt::from(*q)),
        [q] => (BigInt::zero(), BigInt::from(*q)),
        _ => unreachable!(),
    };
    kind.poly(cat).eval(&p, &q)
}

fn sign(odd: bool) -> BigRational {
    if odd {
        -BigRational::one()
    } else {
        BigRational::one()
    }
}

fn ratio((n, d): (i64, i64)) -> Result<BigRational> {
    if d == 0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(BigRational::new(n.into(), d.into()))
}

/// Parity data of a partition written as `(p + q, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Theorem4Flags {
    /// `1` iff `q` is odd.
    pub eps1: u8,
    /// `floor(q / 2)`.
    pub r: u64,
    /// `1` iff `q >= p`, i.e. `l1 <= 2 l2`.
    pub delta: u8,
    /// `1` iff `q - p` is even; only when `delta = 1`.
    pub eps2: Option<u8>,
    /// `floor((q - p) / 2)`; only when `delta = 1`.
    pub w: Option<u64>,
}

impl Theorem4Flags {
    pub fn new(lambda: Partition2) -> Self {
        let (p, q) = (lambda.p(), lambda.lambda2());
        let delta = u8::from(q >= p);
        let (eps2, w) = if q >= p {
            let s = q - p;
            (Some(u8::from(s % 2 == 0)), Some(s / 2))
        } else {
            (None, None)
        };
        Theorem4Flags { eps1: (q % 2) as u8, r: q / 2, delta, eps2, w }
    }
}

/// `m_lambda(T)` from the closed formula.
pub fn multiplicity(lambda: Partition2) -> Result<BigInt> {
    multiplicity_with(Catalog::standard(), lambda)
}

/// The exact value of the closed formula, before the integrality check.
pub fn multiplicity_rational_with(cat: &Catalog, lambda: Partition2) -> Result<BigRational> {
    let l = &cat.lemma3;
    let (p, q) = (lambda.p(), lambda.lambda2());
    let (pb, qb) = (BigInt::from(p), BigInt::from(q));
    let zero = BigInt::zero();
    let f = Theorem4Flags::new(lambda);

    let mut m = l.a_plus.eval(&pb, &qb)?
        + sign(q % 2 == 1) * l.a_minus.eval(&pb, &qb)?
        + sign(p % 2 == 1) * l.b_plus.eval(&zero, &qb)?
        + sign((p + q) % 2 == 1) * l.b_minus.eval(&zero, &qb)?;
    if f.eps1 == 1 {
        m -= sign((p + f.r) % 2 == 1) * ratio(l.eps1)?;
    }
    if f.delta == 1 {
        let s = q - p;
        let sb = BigInt::from(s);
        m += l.c_plus.eval(&zero, &sb)? + sign(s % 2 == 1) * l.c_minus.eval(&zero, &sb)?;
        if f.eps2 == Some(1) {
            // the sign depends on w alone; see the series form in the module docs
            let w = f.w.expect("defined with eps2");
            m += sign(w % 2 == 1) * ratio(l.eps2)?;
        }
    }
    Ok(m)
}

/// Fails with a consistency error unless the formula gives a non-negative
/// integer.
pub fn multiplicity_with(cat: &Catalog, lambda: Partition2) -> Result<BigInt> {
    let m = multiplicity_rational_with(cat, lambda)?;
    if !m.is_integer() || m.is_negative() {
        return Err(Error::Consistency(format!(
            "closed formula gives {m} at {lambda}, not a non-negative integer"
        )));
    }
    Ok(m.to_integer())
}

pub fn lemma3_reassemble(n: u32) -> Result<TruncSeries2> {
    lemma3_reassemble_with(Catalog::standard(), n)
}

/// The multiplicity series through total degree `n` in `(t, v)`, summed
/// from the four series one by one.
pub fn lemma3_reassemble_with(cat: &Catalog, n: u32) -> Result<TruncSeries2> {
    let l = &cat.lemma3;
    let vars = Vars::bi("t", "v");
    let n64 = u64::from(n);
    let mut grid = vec![vec![BigRational::zero(); n as usize + 1]; n as usize + 1];
    let zero = BigInt::zero();

    for p in 0..=n64 {
        for q in 0..=(n64 - p) {
            let (pb, qb) = (BigInt::from(p), BigInt::from(q));
            grid[p as usize][q as usize] += l.a_plus.eval(&pb, &qb)?
                + sign(q % 2 == 1) * l.a_minus.eval(&pb, &qb)?
                + sign(p % 2 == 1) * l.b_plus.eval(&zero, &qb)?
                + sign((p + q) % 2 == 1) * l.b_minus.eval(&zero, &qb)?;
        }
    }
    let eps1 = ratio(l.eps1)?;
    for p in 0..=n64 {
        for r in (0..).take_while(|r| p + 2 * r < n64) {
            grid[p as usize][(2 * r + 1) as usize] -= sign((p + r) % 2 == 1) * &eps1;
        }
    }
    // (tv)^p v^s sits at t^p v^(p + s)
    for p in 0..=n64 {
        for s in (0..).take_while(|s| 2 * p + s <= n64) {
            let sb = BigInt::from(s);
            grid[p as usize][(p + s) as usize] +=
                l.c_plus.eval(&zero, &sb)? + sign(s % 2 == 1) * l.c_minus.eval(&zero, &sb)?;
        }
    }
    let eps2 = ratio(l.eps2)?;
    for p in 0..=n64 {
        for w in (0..).take_while(|w| 2 * p + 2 * w <= n64) {
            grid[p as usize][(p + 2 * w) as usize] += sign(w % 2 == 1) * &eps2;
        }
    }

    let terms = grid.into_iter().enumerate().flat_map(|(p, row)| {
        row.into_iter().enumerate().map(move |(q, c)| ((p as u32, q as u32), c))
    });
    Ok(TruncSeries2::from_terms(&vars, n, terms))
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn frac(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// The leading part of `m_lambda` up to `O((l1 + l2)^6)`.
///
/// For `l1 > 2 l2` this is `l2^7/(7! 2^5) + (l1-l2) l2^6/(6! 2^4)
/// + (l1-l2)^2 l2^5/(5! 2^4)`; otherwise `(2 l2 - l1)^7/(7! 2^5)` is
/// subtracted. The value is reported as is: for `l2 = 0` it is `0` although
/// `m_(l1, 0)` grows quadratically.
pub fn asymptotic_main(lambda: Partition2) -> BigRational {
    let l1 = BigInt::from(lambda.lambda1());
    let l2 = BigInt::from(lambda.lambda2());
    let d = &l1 - &l2;
    let pw = |b: &BigInt, e: usize| num_traits::pow(b.clone(), e);
    let mut m = frac(pw(&l2, 7), factorial(7) * 32)
        + frac(&d * pw(&l2, 6), factorial(6) * 16)
        + frac(&d * &d * pw(&l2, 5), factorial(5) * 16);
    if lambda.lambda1() <= 2 * lambda.lambda2() {
        let e = BigInt::from(2u64) * &l2 - &l1;
        m -= frac(pw(&e, 7), factorial(7) * 32);
    }
    m
}

/// Coefficient of `l1^2` in `m_(l1, l2)` for fixed `l2` and `l1 > 2 l2`.
pub fn quadratic_coeff_fixed_lambda2(lambda2: u64) -> BigRational {
    let q = BigInt::from(lambda2);
    let pw = |e: usize| num_traits::pow(q.clone(), e);
    let r = |n: BigInt, d: i64| BigRational::new(n, d.into());
    let even = r(pw(5), 120 * 16)
        + r(pw(4), 32 * 3)
        + r(pw(3) * 5, 64)
        + r(pw(2) * 13, 24 * 2)
        + r(pw(1) * 1633, 120 * 32)
        + r(BigInt::from(15), 64);
    let alternating = r(q.clone(), 256) + r(BigInt::one(), 64);
    even + sign(lambda2 % 2 == 1) * alternating
}

/// `m_mu(M_3(F))` for `mu = (mu1, ..., mu9)` with `mu3 = ... = mu9 >= 2`,
/// which equals `m_(mu1 - mu3, mu2 - mu3)(T)`.
pub fn ordinary_multiplicity(mu: &[u64]) -> Result<BigInt> {
    if mu.len() != 9 {
        return Err(Error::Usage(format!("expected 9 parts, got {}", mu.len())));
    }
    if mu.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Usage(format!("{mu:?} is not non-increasing")));
    }
    if mu[2..].iter().any(|&m| m != mu[2]) || mu[2] < 2 {
        return Err(Error::OutOfScope(format!(
            "{mu:?}: a formula is known only when mu3 = ... = mu9 >= 2"
        )));
    }
    multiplicity(Partition2::new(mu[0] - mu[2], mu[1] - mu[2])?)
}

/// `m_lambda(T)` for two generic 2x2 matrices:
/// `(l1 - l2 + 1)(l2 - l3 + 1)(l3 - l4 + 1)`, and `0` once `l5 != 0`.
pub fn n2_mixed_multiplicity(lambda: &[u64]) -> Result<BigInt> {
    if lambda.len() < 4 {
        return Err(Error::Usage(format!("expected at least 4 parts, got {}", lambda.len())));
    }
    if lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Usage(format!("{lambda:?} is not non-increasing")));
    }
    if lambda[4..].iter().any(|&x| x != 0) {
        return Ok(BigInt::zero());
    }
    Ok((0..3).fold(BigInt::one(), |acc, k| acc * BigInt::from(lambda[k] - lambda[k + 1] + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::mseries::mprime_ht2_closed;
    use crate::series::{expand, oracle_multiplicity, oracle_table};
    use proptest::prelude::*;

    fn lam(a: u64, b: u64) -> Partition2 {
        Partition2::new(a, b).unwrap()
    }

    #[test]
    fn coefficient_values() {
        use Lemma3Kind::*;
        assert_eq!(lemma3_coeff(BPlus, &[0]).unwrap(), rat(1, 64));
        assert_eq!(lemma3_coeff(BMinus, &[0]).unwrap(), rat(7, 64));
        assert_eq!(lemma3_coeff(CMinus, &[0]).unwrap(), rat(1, 1024));
        assert_eq!(lemma3_coeff(APlus, &[0, 0]).unwrap(), rat(43, 64));
        assert_eq!(lemma3_coeff(AMinus, &[0, 0]).unwrap(), rat(13, 64));
        assert_eq!(lemma3_coeff(CPlus, &[0]).unwrap(), rat(-17, 1024));
        assert!(matches!(lemma3_coeff(APlus, &[1]), Err(Error::Usage(_))));
        assert!(matches!(lemma3_coeff(BPlus, &[1, 2]), Err(Error::Usage(_))));
        assert_eq!("c_minus".parse::<Lemma3Kind>().unwrap(), CMinus);
    }

    #[test]
    fn leading_blocks() {
        // a+ ~ (84 p^2 + 14 p q + q^2) q^5 / (2^5 7!), c+ ~ -s^7 / (2^5 7!)
        let big = 1_000_000u64;
        let a = lemma3_coeff(Lemma3Kind::APlus, &[0, big]).unwrap();
        let lead = BigRational::new(num_traits::pow(BigInt::from(big), 7), BigInt::from(32 * 5040));
        let rel = (&a - &lead) / &lead;
        assert!(rel.abs() < rat(1, 1000));
        let c = lemma3_coeff(Lemma3Kind::CPlus, &[big]).unwrap();
        assert!(((&c + &lead) / &lead).abs() < rat(1, 1000));
    }

    #[test]
    fn flags() {
        let f = Theorem4Flags::new(lam(2, 1));
        assert_eq!((f.eps1, f.r, f.delta, f.eps2, f.w), (1, 0, 1, Some(1), Some(0)));
        let f = Theorem4Flags::new(lam(7, 2));
        assert_eq!((f.eps1, f.r, f.delta, f.eps2, f.w), (0, 1, 0, None, None));
        let f = Theorem4Flags::new(lam(9, 6));
        assert_eq!((f.eps1, f.r, f.delta, f.eps2, f.w), (0, 3, 1, Some(0), Some(1)));
    }

    #[test]
    fn small_multiplicities() {
        assert_eq!(multiplicity(lam(0, 0)).unwrap(), BigInt::from(1));
        assert_eq!(multiplicity(lam(1, 0)).unwrap(), BigInt::from(2));
        assert_eq!(multiplicity(lam(2, 1)).unwrap(), oracle_multiplicity(lam(2, 1)));
        assert_eq!(multiplicity(lam(12, 5)).unwrap(), oracle_multiplicity(lam(12, 5)));
    }

    #[test]
    fn matches_oracle_through_degree_40() {
        for (l, m) in oracle_table(40) {
            assert_eq!(multiplicity(l).unwrap(), m, "at {l}");
        }
    }

    #[test]
    fn integral_through_degree_200() {
        for l in Partition2::up_to(200) {
            multiplicity(l).unwrap();
        }
    }

    #[test]
    fn reassembly_matches_closed_form() {
        let n = 30;
        let lhs = lemma3_reassemble(n).unwrap();
        let rhs = expand(mprime_ht2_closed().value(), n).unwrap();
        assert_eq!(lhs.coeff(0, 0).unwrap(), rat(1, 1));
        assert_eq!(lhs.coeff(1, 0).unwrap(), rat(2, 1));
        let rhs = TruncSeries2::from_poly(&rhs.to_poly().embed(&Vars::bi("t", "v")).unwrap(), n);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn asymptotics() {
        assert_eq!(asymptotic_main(lam(0, 0)), rat(0, 1));
        assert_eq!(asymptotic_main(lam(17, 0)), rat(0, 1));
        assert_eq!(asymptotic_main(lam(10, 10)), rat(0, 1));
        // (3k, k): three-term branch
        let k = 4u64;
        let l2 = BigInt::from(k);
        let expect = BigRational::new(num_traits::pow(l2.clone(), 7), BigInt::from(5040 * 32))
            + BigRational::new(BigInt::from(2 * k) * num_traits::pow(l2.clone(), 6), BigInt::from(720 * 16))
            + BigRational::new(BigInt::from(4 * k * k) * num_traits::pow(l2, 5), BigInt::from(120 * 16));
        assert_eq!(asymptotic_main(lam(3 * k, k)), expect);

        let ratio = |s: u64| {
            let l = lam(3 * s, s);
            let diff = BigRational::from_integer(multiplicity(l).unwrap()) - asymptotic_main(l);
            diff.abs() / BigRational::from_integer(num_traits::pow(BigInt::from(4 * s), 6))
        };
        let base = ratio(8);
        for s in [16, 32, 64] {
            assert!(ratio(s) <= &base * rat(4, 1), "s = {s}");
        }
    }

    #[test]
    fn quadratic_coefficients() {
        assert_eq!(quadratic_coeff_fixed_lambda2(0), rat(1, 4));
        let q1 = rat(1, 1920) + rat(1, 96) + rat(5, 64) + rat(13, 48) + rat(1633, 3840) + rat(15, 64)
            - rat(1, 256)
            - rat(1, 64);
        assert_eq!(quadratic_coeff_fixed_lambda2(1), q1);
        // m((L + 2, 2)) / L^2 approaches the coefficient
        let c = quadratic_coeff_fixed_lambda2(2);
        for big in [1000u64, 10000] {
            let m = BigRational::from_integer(multiplicity(lam(big + 2, 2)).unwrap());
            let r = m / BigRational::from_integer(BigInt::from(big * big));
            assert!(((&r - &c) / &c).abs() < rat(1, 100));
        }
    }

    /// Fits `a x^2 + b x + c` through three points.
    fn fit(xs: [i64; 3], ys: [BigRational; 3]) -> [BigRational; 3] {
        let x: Vec<BigRational> = xs.iter().map(|&v| rat(v, 1)).collect();
        let d01 = (&ys[1] - &ys[0]) / (&x[1] - &x[0]);
        let d12 = (&ys[2] - &ys[1]) / (&x[2] - &x[1]);
        let a = (&d12 - &d01) / (&x[2] - &x[0]);
        let b = &d01 - &a * (&x[0] + &x[1]);
        let c = &ys[0] - &a * &x[0] * &x[0] - &b * &x[0];
        [a, b, c]
    }

    #[test]
    fn period_two_quadratics() {
        for l2 in 0..=6u64 {
            let m = |l1: u64| BigRational::from_integer(multiplicity(lam(l1, l2)).unwrap());
            let start = 2 * l2 + 1;
            for parity in 0..2 {
                let xs: Vec<u64> = (start..start + 6).filter(|x| x % 2 == parity).collect();
                let [a, b, c] = fit(
                    [xs[0] as i64, xs[1] as i64, xs[2] as i64],
                    [m(xs[0]), m(xs[1]), m(xs[2])],
                );
                assert_eq!(a, quadratic_coeff_fixed_lambda2(l2), "l2 = {l2}");
                for x in (start + 6..start + 46).filter(|x| x % 2 == parity) {
                    let xr = rat(x as i64, 1);
                    assert_eq!(&a * &xr * &xr + &b * &xr + &c, m(x), "l2 = {l2}, l1 = {x}");
                }
            }
        }
    }

    #[test]
    fn ordinary_cocharacters() {
        assert_eq!(ordinary_multiplicity(&[2; 9]).unwrap(), BigInt::from(1));
        assert_eq!(
            ordinary_multiplicity(&[7, 5, 3, 3, 3, 3, 3, 3, 3]).unwrap(),
            multiplicity(lam(4, 2)).unwrap()
        );
        assert!(matches!(
            ordinary_multiplicity(&[5, 4, 3, 3, 3, 3, 3, 3, 1]),
            Err(Error::OutOfScope(_))
        ));
        assert!(matches!(ordinary_multiplicity(&[1; 9]), Err(Error::OutOfScope(_))));
        assert!(matches!(ordinary_multiplicity(&[3; 8]), Err(Error::Usage(_))));
    }

    #[test]
    fn two_by_two() {
        assert_eq!(n2_mixed_multiplicity(&[0, 0, 0, 0]).unwrap(), BigInt::from(1));
        assert_eq!(n2_mixed_multiplicity(&[3, 1, 0, 0]).unwrap(), BigInt::from(6));
        assert_eq!(n2_mixed_multiplicity(&[2, 2, 2, 2]).unwrap(), BigInt::from(1));
        assert_eq!(n2_mixed_multiplicity(&[2, 2, 2, 2, 1]).unwrap(), BigInt::from(0));
        assert_eq!(n2_mixed_multiplicity(&[2, 2, 2, 2, 0]).unwrap(), BigInt::from(1));
    }

    proptest! {
        #[test]
        fn closed_formula_is_a_nonnegative_integer(l1 in 0u64..5000, l2 in 0u64..5000) {
            let (a, b) = if l1 >= l2 { (l1, l2) } else { (l2, l1) };
            let m = multiplicity_rational_with(Catalog::standard(), lam(a, b)).unwrap();
            prop_assert!(m.is_integer() && !m.is_negative());
        }
    }
}
