//! Every hard-coded constant of the closed forms, in one place.
//!
//! All numbers are stored as `i64` slots so that fault-injection tests can
//! perturb any one of them through [`Catalog::slots_mut`]. Slot names are
//! prefixed by the form they belong to: `eq8.`, `eq9.`, `lemma3.`, `pf.`.

use num_bigint::BigInt;
use num_rational::BigRational;
use std::sync::LazyLock;

use crate::error::{Error, Result};
use crate::exactalg::{Poly, RatFunc, TFactor, VBasis, Vars};

/// `v^shift * (c0 + c1 v + c2 v^2 + ...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedPoly {
    pub shift: i64,
    pub coeffs: Vec<i64>,
}

impl ShiftedPoly {
    fn new(shift: i64, coeffs: &[i64]) -> Self {
        ShiftedPoly { shift, coeffs: coeffs.to_vec() }
    }

    /// As a polynomial in the variable `name` of `vars`.
    pub fn to_poly(&self, vars: &Vars, name: &str) -> Result<Poly> {
        let idx = vars
            .index(name)
            .ok_or_else(|| Error::Variables(format!("{name} not in {vars}")))?;
        let shift = exponent(self.shift)?;
        Ok(Poly::from_terms(
            vars,
            self.coeffs.iter().enumerate().map(|(k, &c)| {
                let mut e = [0, 0];
                e[idx] = shift + k as u32;
                (e, BigRational::from_integer(c.into()))
            }),
        ))
    }

    fn slots_mut<'a>(&'a mut self, prefix: &str, out: &mut Vec<(String, &'a mut i64)>) {
        out.push((format!("{prefix}.shift"), &mut self.shift));
        for (k, c) in self.coeffs.iter_mut().enumerate() {
            out.push((format!("{prefix}.c{k}"), c));
        }
    }
}

fn exponent(e: i64) -> Result<u32> {
    u32::try_from(e).map_err(|_| Error::Domain(format!("negative exponent {e}")))
}

/// Exponents of `(1-v)`, `(1+v)`, `(1+v^2)` in a denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VDen {
    pub one_minus_v: i64,
    pub one_plus_v: i64,
    pub one_plus_v2: i64,
}

impl VDen {
    pub fn to_poly(&self, vars: &Vars, name: &str) -> Result<Poly> {
        let f = |s: &str, k: i64| -> Result<Poly> {
            Ok(Poly::parse(vars, &s.replace('v', name))?.pow(exponent(k)?))
        };
        Ok(&(&f("1 - v", self.one_minus_v)? * &f("1 + v", self.one_plus_v)?)
            * &f("1 + v^2", self.one_plus_v2)?)
    }

    fn slots_mut<'a>(&'a mut self, prefix: &str, out: &mut Vec<(String, &'a mut i64)>) {
        out.push((format!("{prefix}.one_minus_v"), &mut self.one_minus_v));
        out.push((format!("{prefix}.one_plus_v"), &mut self.one_plus_v));
        out.push((format!("{prefix}.one_plus_v2"), &mut self.one_plus_v2));
    }
}

/// `M'(H(T_2))` as one fraction: `sum h_i(v) t^i` over the product of the
/// `v`-part and the `t`-part of the denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eq8 {
    /// `h_0, h_1, h_2, h_3`.
    pub h: [ShiftedPoly; 4],
    pub v_den: VDen,
    pub one_minus_t: i64,
    pub one_plus_t: i64,
    pub one_minus_vt: i64,
}

/// One elementary fraction `numerator(v) / (scale * vden(v)) / pole`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eq9Term {
    pub name: &'static str,
    pub factor: TFactor,
    pub power: i64,
    pub numerator: ShiftedPoly,
    pub scale: i64,
    pub v_den: VDen,
}

impl Eq9Term {
    /// The `v`-coefficient as a rational function in `vars`.
    pub fn coefficient(&self, vars: &Vars, name: &str) -> Result<RatFunc> {
        let den = self.v_den.to_poly(vars, name)?.scale(&BigRational::from_integer(self.scale.into()));
        RatFunc::normalize(self.numerator.to_poly(vars, name)?, den)
    }
}

/// `(sum c * p^i * q^j) / den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub terms: Vec<(i64, [u32; 2])>,
    pub den: i64,
}

impl Block {
    fn new(terms: &[(i64, [u32; 2])], den: i64) -> Self {
        Block { terms: terms.to_vec(), den }
    }

    pub fn eval(&self, p: &BigInt, q: &BigInt) -> Result<BigRational> {
        if self.den == 0 {
            return Err(Error::ZeroDenominator);
        }
        let mut num = BigInt::from(0);
        for (c, [i, j]) in &self.terms {
            num += BigInt::from(*c) * num_traits::pow(p.clone(), *i as usize) * num_traits::pow(q.clone(), *j as usize);
        }
        Ok(BigRational::new(num, BigInt::from(self.den)))
    }

    fn slots_mut<'a>(&'a mut self, prefix: &str, out: &mut Vec<(String, &'a mut i64)>) {
        for (k, (c, _)) in self.terms.iter_mut().enumerate() {
            out.push((format!("{prefix}.t{k}"), c));
        }
        out.push((format!("{prefix}.den"), &mut self.den));
    }
}

/// A sum of blocks. One-argument polynomials use the second exponent slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPoly(pub Vec<Block>);

impl BlockPoly {
    pub fn eval(&self, p: &BigInt, q: &BigInt) -> Result<BigRational> {
        let mut acc = BigRational::from_integer(0.into());
        for b in &self.0 {
            acc += b.eval(p, q)?;
        }
        Ok(acc)
    }

    fn slots_mut<'a>(&'a mut self, prefix: &str, out: &mut Vec<(String, &'a mut i64)>) {
        for (k, b) in self.0.iter_mut().enumerate() {
            b.slots_mut(&format!("{prefix}.b{k}"), out);
        }
    }
}

/// The coefficient polynomials and the two `1/64` corrections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma3 {
    pub a_plus: BlockPoly,
    pub a_minus: BlockPoly,
    pub b_plus: BlockPoly,
    pub b_minus: BlockPoly,
    pub c_plus: BlockPoly,
    pub c_minus: BlockPoly,
    /// `(num, den)` of the correction on `t^p v^(2r+1)`, entering with a minus sign.
    pub eps1: (i64, i64),
    /// `(num, den)` of the correction on `(tv)^p v^(2w)`.
    pub eps2: (i64, i64),
}

/// Elementary-fraction expansion in `v` of one coefficient of the `t`-form:
/// `sum num/den * basis`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VExpansion {
    pub name: &'static str,
    pub terms: Vec<(VBasis, i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    pub eq8: Eq8,
    /// `a_3, a_2, a_1, b, c`.
    pub eq9: [Eq9Term; 5],
    pub lemma3: Lemma3,
    /// Expansions of `a_3, a_2, a_1, b, c` in the basis `1/(1-v)^k`,
    /// `1/(1+v)^k`, `1/(1+v^2)`, `v/(1+v^2)`.
    pub v_expansions: [VExpansion; 5],
}

const F5: i64 = 120;
const F6: i64 = 720;
const F7: i64 = 5040;

fn vden(a: i64, b: i64, c: i64) -> VDen {
    VDen { one_minus_v: a, one_plus_v: b, one_plus_v2: c }
}

fn vexp(name: &'static str, minus: &[(u32, i64, i64)], plus: &[(u32, i64, i64)], extra: &[(VBasis, i64, i64)]) -> VExpansion {
    let mut terms: Vec<_> = minus.iter().map(|&(k, n, d)| (VBasis::OneMinusV(k), n, d)).collect();
    terms.extend(plus.iter().map(|&(k, n, d)| (VBasis::OnePlusV(k), n, d)));
    terms.extend_from_slice(extra);
    VExpansion { name, terms }
}

impl Catalog {
    /// The published constants.
    pub fn standard() -> &'static Catalog {
        static STANDARD: LazyLock<Catalog> = LazyLock::new(Catalog::build);
        &STANDARD
    }

    fn build() -> Catalog {
        let sp = ShiftedPoly::new;
        let eq8 = Eq8 {
            h: [
                sp(0, &[1, -1, 3, -1, 1]),
                sp(1, &[2, -4, 1, -1, -1]),
                sp(1, &[-1, -1, 1, -4, 2]),
                sp(2, &[1, -1, 3, -1, 1]),
            ],
            v_den: vden(7, 4, 1),
            one_minus_t: 3,
            one_plus_t: 1,
            one_minus_vt: 1,
        };
        let term = |name, factor, power, numerator, scale, v_den| Eq9Term {
            name,
            factor,
            power,
            numerator,
            scale,
            v_den,
        };
        let eq9 = [
            term("a3", TFactor::OneMinusT, 3, sp(0, &[1]), 2, vden(6, 2, 0)),
            term("a2", TFactor::OneMinusT, 2, sp(0, &[1, -2, 3]), 4, vden(7, 3, 0)),
            term("a1", TFactor::OneMinusT, 1, sp(0, &[1, -6, 14, -6, 1]), 8, vden(8, 4, 0)),
            term("b", TFactor::OnePlusT, 1, sp(0, &[1]), 8, vden(2, 4, 1)),
            term("c", TFactor::OneMinusVT, 1, sp(4, &[-1]), 1, vden(8, 4, 1)),
        ];

        let b = Block::new;
        let lemma3 = Lemma3 {
            a_plus: BlockPoly(vec![
                b(&[(84, [2, 5]), (14, [1, 6]), (1, [0, 7])], 32 * F7),
                b(&[(40, [2, 4]), (12, [1, 5]), (1, [0, 6])], 32 * F5),
                b(&[(90, [2, 3]), (49, [1, 4]), (5, [0, 5])], 128 * 9),
                b(&[(104, [2, 2]), (108, [1, 3]), (15, [0, 4])], 128 * 3),
                b(&[(19596, [2, 1]), (43666, [1, 2]), (9599, [0, 3])], 64 * F6),
                b(&[(1800, [2, 0]), (11676, [1, 1]), (4993, [0, 2])], 64 * F5),
                b(&[(9492, [1, 0]), (11437, [0, 1])], 512 * 3 * 7),
                b(&[(43, [0, 0])], 64),
            ]),
            a_minus: BlockPoly(vec![
                b(&[(12, [2, 1]), (18, [1, 2]), (7, [0, 3])], 1024 * 3),
                b(&[(8, [2, 0]), (28, [1, 1]), (17, [0, 2])], 512),
                b(&[(180, [1, 0]), (229, [0, 1])], 512 * 3),
                b(&[(13, [0, 0])], 64),
            ]),
            b_plus: BlockPoly(vec![b(&[(1, [0, 1]), (4, [0, 0])], 256)]),
            b_minus: BlockPoly(vec![b(&[(2, [0, 3]), (24, [0, 2]), (85, [0, 1]), (84, [0, 0])], 256 * 3)]),
            c_plus: BlockPoly(vec![
                b(&[(-1, [0, 7])], 32 * F7),
                b(&[(-1, [0, 6])], 64 * F5),
                b(&[(-19, [0, 5])], 32 * F6),
                b(&[(-1, [0, 4])], 256 * 6),
                b(&[(391, [0, 3])], 64 * F6),
                b(&[(79, [0, 2])], 1024 * 5),
                b(&[(-1453, [0, 1])], 128 * F5 * 7),
                b(&[(-17, [0, 0])], 1024),
            ]),
            c_minus: BlockPoly(vec![b(&[(-1, [0, 3]), (-9, [0, 2]), (-17, [0, 1]), (3, [0, 0])], 1024 * 3)]),
            eps1: (1, 64),
            eps2: (1, 64),
        };

        let v_expansions = [
            vexp(
                "a3",
                &[(6, 1, 8), (5, 1, 8), (4, 3, 32), (3, 1, 16), (2, 5, 128), (1, 3, 128)],
                &[(2, 1, 128), (1, 3, 128)],
                &[],
            ),
            vexp(
                "a2",
                &[(7, 1, 16), (6, -1, 32), (4, 1, 32), (3, 11, 256), (2, 21, 512), (1, 17, 512)],
                &[(3, 3, 256), (2, 13, 512), (1, 17, 512)],
                &[],
            ),
            vexp(
                "a1",
                &[
                    (8, 1, 32),
                    (6, -1, 32),
                    (5, -1, 32),
                    (4, -5, 512),
                    (3, 3, 256),
                    (2, 25, 1024),
                    (1, 29, 1024),
                ],
                &[(4, 7, 512), (3, 7, 256), (2, 33, 1024), (1, 29, 1024)],
                &[],
            ),
            vexp(
                "b",
                &[(2, 1, 256), (1, 3, 256)],
                &[(4, 1, 64), (3, 1, 32), (2, 9, 256), (1, 7, 256)],
                &[(VBasis::VOverOnePlusV2, -1, 64)],
            ),
            vexp(
                "c",
                &[
                    (8, -1, 32),
                    (7, 1, 32),
                    (6, 1, 32),
                    (4, -11, 512),
                    (3, -11, 512),
                    (2, -9, 1024),
                    (1, 1, 256),
                ],
                &[(4, -1, 512), (3, -1, 512), (2, 1, 1024), (1, 1, 256)],
                &[(VBasis::InvOnePlusV2, 1, 64)],
            ),
        ];

        Catalog { eq8, eq9, lemma3, v_expansions }
    }

    /// Mutable access to every constant, with a stable name for each.
    pub fn slots_mut(&mut self) -> Vec<(String, &mut i64)> {
        let mut out = Vec::new();
        let Catalog { eq8, eq9, lemma3, v_expansions } = self;

        for (i, h) in eq8.h.iter_mut().enumerate() {
            h.slots_mut(&format!("eq8.h{i}"), &mut out);
        }
        eq8.v_den.slots_mut("eq8.den", &mut out);
        out.push(("eq8.den.one_minus_t".into(), &mut eq8.one_minus_t));
        out.push(("eq8.den.one_plus_t".into(), &mut eq8.one_plus_t));
        out.push(("eq8.den.one_minus_vt".into(), &mut eq8.one_minus_vt));

        for t in eq9.iter_mut() {
            let prefix = format!("eq9.{}", t.name);
            out.push((format!("{prefix}.power"), &mut t.power));
            t.numerator.slots_mut(&format!("{prefix}.num"), &mut out);
            out.push((format!("{prefix}.scale"), &mut t.scale));
            t.v_den.slots_mut(&format!("{prefix}.den"), &mut out);
        }

        let Lemma3 { a_plus, a_minus, b_plus, b_minus, c_plus, c_minus, eps1, eps2 } = lemma3;
        a_plus.slots_mut("lemma3.a_plus", &mut out);
        a_minus.slots_mut("lemma3.a_minus", &mut out);
        b_plus.slots_mut("lemma3.b_plus", &mut out);
        b_minus.slots_mut("lemma3.b_minus", &mut out);
        c_plus.slots_mut("lemma3.c_plus", &mut out);
        c_minus.slots_mut("lemma3.c_minus", &mut out);
        out.push(("lemma3.eps1.num".into(), &mut eps1.0));
        out.push(("lemma3.eps1.den".into(), &mut eps1.1));
        out.push(("lemma3.eps2.num".into(), &mut eps2.0));
        out.push(("lemma3.eps2.den".into(), &mut eps2.1));

        for e in v_expansions.iter_mut() {
            for (k, (_, n, d)) in e.terms.iter_mut().enumerate() {
                out.push((format!("pf.{}.{k}.num", e.name), n));
                out.push((format!("pf.{}.{k}.den", e.name), d));
            }
        }
        out
    }

    /// Names of all slots, in `slots_mut` order.
    pub fn slot_names(&self) -> Vec<String> {
        self.clone().slots_mut().into_iter().map(|(n, _)| n).collect()
    }

    /// A copy with the named slot increased by `delta`.
    pub fn perturbed(&self, name: &str, delta: i64) -> Result<Catalog> {
        let mut c = self.clone();
        let mut found = false;
        for (n, slot) in c.slots_mut() {
            if n == name {
                *slot += delta;
                found = true;
            }
        }
        if !found {
            return Err(Error::Usage(format!("unknown constant {name}")));
        }
        Ok(c)
    }
}

/// The printed intermediates of the `w_0 -> w_4` pipeline.
pub mod printed {
    use super::*;

    fn tv() -> Vars {
        Vars::bi("t", "v")
    }

    fn prod(factors: &[(&str, u32)]) -> Poly {
        let vars = tv();
        factors.iter().fold(Poly::one(&vars), |acc, (s, k)| {
            &acc * &Poly::parse(&vars, s).expect("static factor").pow(*k)
        })
    }

    /// `(1 + v^2 t) / ((1-v^2)^2 (1+v^2)(1-t^2)(1-vt))`.
    pub fn w1() -> RatFunc {
        RatFunc::normalize(
            prod(&[("1 + t*v^2", 1)]),
            prod(&[("1 - v^2", 2), ("1 + v^2", 1), ("1 - t^2", 1), ("1 - t*v", 1)]),
        )
        .expect("static")
    }

    /// `(-v^2(v^2-v+1) t^2 - v(v^2-1) t + (v^2-v+1))` over
    /// `(1-v)^4 (1+v)^3 (1+v^2)(1-t)^2 (1+t)(1-vt)`.
    pub fn w2() -> RatFunc {
        let num = &(&prod(&[("v^2 - v + 1", 1)])
            - &prod(&[("v^2", 1), ("v^2 - v + 1", 1), ("t^2", 1)]))
            - &prod(&[("v", 1), ("v^2 - 1", 1), ("t", 1)]);
        RatFunc::normalize(
            num,
            prod(&[
                ("1 - v", 4),
                ("1 + v", 3),
                ("1 + v^2", 1),
                ("1 - t", 2),
                ("1 + t", 1),
                ("1 - t*v", 1),
            ]),
        )
        .expect("static")
    }

    /// The `h_i` numerator over `(1-v)^6 (1+v)^4 (1+v^2)(1-t)^3 (1+t)(1-vt)`.
    pub fn w3(cat: &Catalog) -> Result<RatFunc> {
        let vars = tv();
        let mut num = Poly::zero(&vars);
        for (i, h) in cat.eq8.h.iter().enumerate() {
            num = &num + &h.to_poly(&vars, "v")?.mul_monomial([i as u32, 0], &BigRational::from_integer(1.into()));
        }
        RatFunc::normalize(
            num,
            prod(&[
                ("1 - v", 6),
                ("1 + v", 4),
                ("1 + v^2", 1),
                ("1 - t", 3),
                ("1 + t", 1),
                ("1 - t*v", 1),
            ]),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    #[test]
    fn slot_names_are_unique() {
        let names = Catalog::standard().slot_names();
        let set: std::collections::BTreeSet<_> = names.iter().collect();
        assert_eq!(set.len(), names.len());
        assert!(names.iter().any(|n| n == "eq8.h3.c2"));
        assert!(names.iter().any(|n| n == "lemma3.eps2.den"));
    }

    #[test]
    fn perturbation_touches_one_slot() {
        let cat = Catalog::standard();
        let p = cat.perturbed("eq8.h0.c0", 1).unwrap();
        assert_eq!(p.eq8.h[0].coeffs[0], 2);
        assert_eq!(p.eq8.h[1], cat.eq8.h[1]);
        assert!(cat.perturbed("nope", 1).is_err());
    }

    #[test]
    fn block_values() {
        let l = &Catalog::standard().lemma3;
        let z = BigInt::from(0);
        assert_eq!(l.b_plus.eval(&z, &z).unwrap(), rat(1, 64));
        assert_eq!(l.b_minus.eval(&z, &z).unwrap(), rat(7, 64));
        assert_eq!(l.c_minus.eval(&z, &z).unwrap(), rat(1, 1024));
        assert_eq!(l.a_plus.eval(&z, &z).unwrap(), rat(43, 64));
    }

    #[test]
    fn printed_w2_numerator() {
        let w2 = printed::w2();
        // the numerator at t = 0 is v^2 - v + 1 over the v-part of the denominator
        let at0 = w2.eval(&[rat(0, 1), rat(2, 1)]).unwrap();
        assert_eq!(at0, rat(1, 45));
    }
}
