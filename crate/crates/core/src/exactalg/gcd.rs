//! Polynomial GCD over the integers by primitive pseudo-remainder sequences.
//!
//! Univariate inputs use dense `Z[y]` arithmetic. Bivariate inputs are read
//! as polynomials in a main variable with coefficients in `Z[y]`, and the
//! gcd is the product of the content gcd and the primitive PRS result.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{Poly, Vars};

type UPoly = Vec<BigInt>;
type BPoly = Vec<UPoly>;

fn trim(p: &mut UPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn u_deg(p: &UPoly) -> usize {
    p.len().saturating_sub(1)
}

fn u_content(p: &UPoly) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn u_mul(a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn u_sub(a: &UPoly, b: &UPoly) -> UPoly {
    let n = a.len().max(b.len());
    let mut out: UPoly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = b.get(i).cloned().unwrap_or_default();
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

fn u_scale(a: &UPoly, c: &BigInt) -> UPoly {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

/// Primitive part with positive leading coefficient.
fn u_primitive(p: &UPoly) -> UPoly {
    if p.is_empty() {
        return Vec::new();
    }
    let mut c = u_content(p);
    if p.last().unwrap().is_negative() {
        c = -c;
    }
    p.iter().map(|x| x / &c).collect()
}

/// Exact quotient in `Z[y]`; `None` if `b` does not divide `a`.
fn u_div_exact(a: &UPoly, b: &UPoly) -> Option<UPoly> {
    assert!(!b.is_empty(), "division by zero polynomial");
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() < b.len() {
        return None;
    }
    let mut rem = a.clone();
    let lb = b.last().unwrap();
    let mut q = vec![BigInt::zero(); a.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let top = &rem[k + b.len() - 1];
        if top.is_zero() {
            continue;
        }
        let (qq, r) = top.div_rem(lb);
        if !r.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= &qq * bj;
        }
        q[k] = qq;
    }
    if rem.iter().any(|x| !x.is_zero()) {
        return None;
    }
    trim(&mut q);
    Some(q)
}

/// Pseudo-remainder of `a` by `b` in `Z[y]`, up to a nonzero integer factor.
fn u_prem(a: &UPoly, b: &UPoly) -> UPoly {
    let mut r = a.clone();
    let lb = b.last().unwrap().clone();
    while !r.is_empty() && r.len() >= b.len() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - b.len();
        let g = lr.gcd(&lb);
        let (mr, mb) = (&lb / &g, &lr / &g);
        let mut next = u_scale(&r, &mr);
        for (j, bj) in b.iter().enumerate() {
            next[shift + j] -= &mb * bj;
        }
        trim(&mut next);
        r = next;
    }
    r
}

/// gcd in `Z[y]` with positive leading coefficient; `gcd(0, 0) = 0`.
fn u_gcd(a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_empty() {
        return u_primitive(b).into_iter().map(|x| x * u_content(b)).collect();
    }
    if b.is_empty() {
        return u_primitive(a).into_iter().map(|x| x * u_content(a)).collect();
    }
    let c = u_content(a).gcd(&u_content(b));
    let (mut x, mut y) = (u_primitive(a), u_primitive(b));
    if u_deg(&x) < u_deg(&y) {
        std::mem::swap(&mut x, &mut y);
    }
    let lead_ok = |p: &UPoly| modp(p.last().unwrap()) != 0;
    if lead_ok(&x) && lead_ok(&y) {
        let img = |p: &UPoly| p.iter().map(modp).collect();
        if m_gcd_degree(img(&x), img(&y)) == 0 {
            return vec![c];
        }
    }
    loop {
        if u_deg(&y) == 0 {
            return vec![c];
        }
        let r = u_prem(&x, &y);
        if r.is_empty() {
            return u_scale(&y, &c);
        }
        x = y;
        y = u_primitive(&r);
    }
}

fn b_trim(p: &mut BPoly) {
    while p.last().is_some_and(Vec::is_empty) {
        p.pop();
    }
}

fn b_content(p: &BPoly) -> UPoly {
    let mut g: UPoly = Vec::new();
    for c in p {
        g = u_gcd(&g, c);
        if g.len() == 1 && g[0].is_one() {
            break;
        }
    }
    g
}

fn b_div_upoly(p: &BPoly, c: &UPoly) -> BPoly {
    p.iter()
        .map(|x| u_div_exact(x, c).expect("content divides every coefficient"))
        .collect()
}

fn b_primitive(p: &BPoly) -> BPoly {
    if p.is_empty() {
        return Vec::new();
    }
    let mut c = b_content(p);
    if p.last().unwrap().last().unwrap().is_negative() {
        c = u_scale(&c, &BigInt::from(-1));
    }
    b_div_upoly(p, &c)
}

/// Pseudo-remainder in the main variable, up to a nonzero factor in `Z[y]`.
fn b_prem(a: &BPoly, b: &BPoly) -> BPoly {
    let mut r = a.clone();
    let lb = b.last().unwrap().clone();
    while !r.is_empty() && r.len() >= b.len() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - b.len();
        // cancel the common factor of the two leading coefficients
        let g = u_gcd(&lr, &lb);
        let mr = u_div_exact(&lb, &g).unwrap();
        let mb = u_div_exact(&lr, &g).unwrap();
        let mut next: BPoly = r.iter().map(|c| u_mul(c, &mr)).collect();
        for (j, bj) in b.iter().enumerate() {
            next[shift + j] = u_sub(&next[shift + j], &u_mul(&mb, bj));
        }
        debug_assert!(next.last().unwrap().is_empty());
        b_trim(&mut next);
        // keep coefficient growth in check
        if !next.is_empty() {
            let c = b_content(&next);
            if u_deg(&c) > 0 || c[0].abs() > BigInt::one() {
                next = b_div_upoly(&next, &c);
            }
        }
        r = next;
    }
    r
}

const PRIME: u64 = 2_147_483_647;

fn modp(c: &BigInt) -> u64 {
    let r = c.mod_floor(&BigInt::from(PRIME));
    r.iter_u64_digits().next().unwrap_or(0)
}

fn m_eval(c: &UPoly, at: u64) -> u64 {
    c.iter().rev().fold(0, |acc, x| (acc * at + modp(x)) % PRIME)
}

fn m_inv(a: u64) -> u64 {
    // Fermat
    let (mut base, mut e, mut acc) = (a % PRIME, PRIME - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % PRIME;
        }
        base = base * base % PRIME;
        e >>= 1;
    }
    acc
}

fn m_trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// Degree of the gcd over `Z/p`; both inputs nonzero.
fn m_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    m_trim(&mut a);
    m_trim(&mut b);
    while !b.is_empty() {
        let inv = m_inv(*b.last().unwrap());
        while a.len() >= b.len() {
            let f = a.last().unwrap() * inv % PRIME;
            let shift = a.len() - b.len();
            for (j, bj) in b.iter().enumerate() {
                a[shift + j] = (a[shift + j] + PRIME - f * bj % PRIME) % PRIME;
            }
            m_trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// An upper bound for the degree of `gcd(a, b)` in the main variable, from
/// one image modulo a prime at a point where neither leading coefficient
/// vanishes.
fn b_degree_bound(a: &BPoly, b: &BPoly) -> Option<usize> {
    let (la, lb) = (a.last()?, b.last()?);
    (2..40u64).find_map(|at| {
        if m_eval(la, at) == 0 || m_eval(lb, at) == 0 {
            return None;
        }
        let img = |p: &BPoly| p.iter().map(|c| m_eval(c, at)).collect();
        Some(m_gcd_degree(img(a), img(b)))
    })
}

fn b_gcd(a: &BPoly, b: &BPoly) -> BPoly {
    let c = u_gcd(&b_content(a), &b_content(b));
    let (mut x, mut y) = (b_primitive(a), b_primitive(b));
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    if !y.is_empty() && b_degree_bound(&x, &y) == Some(0) {
        return vec![c];
    }
    let g = loop {
        if y.is_empty() {
            break b_primitive(&x);
        }
        if y.len() <= 1 {
            break vec![vec![BigInt::one()]];
        }
        let r = b_prem(&x, &y);
        if r.is_empty() {
            break b_primitive(&y);
        }
        x = y;
        y = b_primitive(&r);
    };
    g.iter().map(|coef| u_mul(coef, &c)).collect()
}

/// Integer coefficients of `c * p`, where `c` clears all denominators.
fn integer_terms(p: &Poly) -> Vec<([u32; 2], BigInt)> {
    let lcm = p
        .terms()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    p.terms()
        .map(|(e, c)| (*e, (c * BigRational::from_integer(lcm.clone())).to_integer()))
        .collect()
}

fn to_bpoly(p: &Poly, main: usize) -> BPoly {
    let other = 1 - main;
    let mut out: BPoly = Vec::new();
    for (e, c) in integer_terms(p) {
        let (i, j) = (e[main] as usize, e[other] as usize);
        if out.len() <= i {
            out.resize(i + 1, Vec::new());
        }
        if out[i].len() <= j {
            out[i].resize(j + 1, BigInt::zero());
        }
        out[i][j] = c;
    }
    out
}

fn to_upoly(p: &Poly) -> UPoly {
    let mut out: UPoly = Vec::new();
    for (e, c) in integer_terms(p) {
        let i = e[0] as usize;
        if out.len() <= i {
            out.resize(i + 1, BigInt::zero());
        }
        out[i] = c;
    }
    out
}

/// Greatest common divisor of two polynomials over the same variables,
/// returned as a primitive integer polynomial with a positive leading
/// coefficient. Units are ignored: `gcd(p, q)` is only defined up to a
/// rational factor, and a nonzero constant gcd is reported as `1`.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    assert_eq!(a.vars(), b.vars(), "gcd over different variable lists");
    let vars: &Vars = a.vars();
    if a.is_zero() && b.is_zero() {
        return Poly::zero(vars);
    }
    if (a.is_constant() && !a.is_zero()) || (b.is_constant() && !b.is_zero()) {
        return Poly::one(vars);
    }
    let from_int = |e: [u32; 2], c: BigInt| (e, BigRational::from_integer(c));
    if vars.len() == 1 {
        let g = u_primitive(&u_gcd(&to_upoly(a), &to_upoly(b)));
        return Poly::from_terms(
            vars,
            g.into_iter().enumerate().map(|(i, c)| from_int([i as u32, 0], c)),
        );
    }
    // main variable: the one of smaller degree keeps the PRS short
    let deg = |i: usize| a.degree_in(i).unwrap_or(0).max(b.degree_in(i).unwrap_or(0));
    let main = if deg(0) <= deg(1) { 0 } else { 1 };
    let mut g = b_gcd(&to_bpoly(a, main), &to_bpoly(b, main));
    if g.last().and_then(|c| c.last()).is_some_and(Signed::is_negative) {
        g = g.iter().map(|c| u_scale(c, &BigInt::from(-1))).collect();
    }
    let content = g.iter().flatten().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content > BigInt::one() {
        g = g.iter().map(|c| c.iter().map(|x| x / &content).collect()).collect();
    }
    let mut terms = Vec::new();
    for (i, coef) in g.into_iter().enumerate() {
        for (j, c) in coef.into_iter().enumerate() {
            let mut e = [0u32; 2];
            e[main] = i as u32;
            e[1 - main] = j as u32;
            terms.push(from_int(e, c));
        }
    }
    Poly::from_terms(vars, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(vars: &Vars, s: &str) -> Poly {
        Poly::parse(vars, s).unwrap()
    }

    /// Gcd must divide both inputs; the cofactors must be coprime.
    fn check(a: &Poly, b: &Poly, expect: &Poly) {
        let g = poly_gcd(a, b);
        assert!(
            g.div_exact(expect).is_some() && expect.div_exact(&g).is_some(),
            "gcd({a}, {b}) = {g}, expected {expect}"
        );
    }

    #[test]
    fn univariate() {
        let v = Vars::uni("v");
        check(&p(&v, "v^2 - 1"), &p(&v, "v^2 - 2*v + 1"), &p(&v, "v - 1"));
        check(&p(&v, "2*v + 2"), &p(&v, "4*v^2 - 4"), &p(&v, "v + 1"));
        check(&p(&v, "v^2 + 1"), &p(&v, "v - 1"), &p(&v, "1"));
        check(&p(&v, "1/2*v^3"), &p(&v, "v^5 + v^2"), &p(&v, "v^2"));
    }

    #[test]
    fn bivariate() {
        let tv = Vars::bi("t", "v");
        check(&p(&tv, "t^2 - v^2"), &p(&tv, "t - v"), &p(&tv, "t - v"));
        let f = p(&tv, "1 - t*v");
        let g = p(&tv, "1 + v^2");
        let h = p(&tv, "1 - t");
        check(&(&(&f * &g) * &h), &(&(&f * &g) * &p(&tv, "1 + t")), &(&f * &g));
        // content factor free of the main variable
        check(&(&g * &h), &(&g * &p(&tv, "t + v")), &g);
        check(&p(&tv, "t*v"), &p(&tv, "t^2"), &p(&tv, "t"));
    }

    #[test]
    fn gcd_of_zero() {
        let tv = Vars::bi("t", "v");
        let a = p(&tv, "2*t - 2*v");
        let g = poly_gcd(&a, &Poly::zero(&tv));
        assert_eq!(g, p(&tv, "t - v"));
    }
}
