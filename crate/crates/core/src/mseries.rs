//! Multiplicity series of symmetric functions in two variables.
//!
//! For symmetric `f(x, y) = sum m(l) S_l(x, y)` the multiplicity series is
//! `M'(f)(t, v) = sum m(l1, l2) t^(l1 - l2) v^l2`, and
//!
//! ```text
//! f(x, y) = (x M'(f)(x, xy) - y M'(f)(y, xy)) / (x - y).
//! ```
//!
//! Multiplying `f` by `1/((1-x)(1-y))` or by `1/((1-a(xy)x)(1-a(xy)y))` acts
//! on `M'(f)` through the operators `Y` and `Y_a`; a factor `a(xy)` acts as
//! the scalar `a(v)`.

use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

use crate::constants::{printed, Catalog};
use crate::error::{Error, Result};
use crate::exactalg::{PartialFractionT, Poly, PoleT, RatFunc, TFactor, Vars};
use crate::series::expand_rect;

fn tv() -> Vars {
    Vars::bi("t", "v")
}

fn xy() -> Vars {
    Vars::bi("x", "y")
}

/// A rational function in `(t, v)` that is regular at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct MSeriesForm(RatFunc);

impl MSeriesForm {
    /// Accepts functions of `t`, `v`, or both; constants are fine too.
    pub fn new(f: RatFunc) -> Result<Self> {
        let f = f.embed(&tv())?;
        if !f.is_expandable() {
            return Err(Error::NotExpandable);
        }
        Ok(MSeriesForm(f))
    }

    pub fn parse(num: &str, den: &str) -> Result<Self> {
        Self::new(RatFunc::parse(&tv(), num, den)?)
    }

    pub fn value(&self) -> &RatFunc {
        &self.0
    }

    pub fn into_inner(self) -> RatFunc {
        self.0
    }

    /// Coefficient of `t^p v^q`.
    pub fn coeff(&self, p: u32, q: u32) -> BigRational {
        mseries_coeff(self, p, q)
    }
}

impl fmt::Display for MSeriesForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A one-variable function renamed to `v` inside `(t, v)`.
fn as_v(a: &RatFunc) -> Result<RatFunc> {
    let target = tv();
    let v = RatFunc::var(&target, "v")?;
    match a.vars().len() {
        1 => {
            let name = a.vars().names()[0].clone();
            a.substitute(&[(name.as_str(), &v)])
        }
        _ => {
            let names = a.vars().names().to_vec();
            let mut free = names.iter().filter(|n| {
                let idx = a.vars().index(n).expect("own variable");
                a.num().degree_in(idx).unwrap_or(0) > 0 || a.den().degree_in(idx).unwrap_or(0) > 0
            });
            match (free.next(), free.next()) {
                (None, _) => Ok(RatFunc::constant(
                    &target,
                    a.eval(&[BigRational::zero(), BigRational::zero()])?,
                )),
                (Some(n), None) => {
                    let other = names.iter().find(|m| *m != n).expect("two variables").clone();
                    let zero = RatFunc::zero(&target);
                    a.substitute(&[(n.as_str(), &v), (other.as_str(), &zero)])
                }
                _ => Err(Error::Variables(format!("{a} depends on more than one variable"))),
            }
        }
    }
}

/// `f(x, y) = (x h(x, xy) - y h(y, xy)) / (x - y)`.
///
/// The division by `x - y` is checked, not assumed.
pub fn reconstruct(h: &MSeriesForm) -> Result<RatFunc> {
    let vars = xy();
    let x = RatFunc::var(&vars, "x")?;
    let y = RatFunc::var(&vars, "y")?;
    let prod = &x * &y;
    let at_x = h.0.substitute(&[("t", &x), ("v", &prod)])?;
    let at_y = h.0.substitute(&[("t", &y), ("v", &prod)])?;
    let diff = &(&x * &at_x) - &(&y * &at_y);
    let (num, den) = diff.into_parts();
    let x_minus_y = Poly::parse(&vars, "x - y")?;
    let quotient = num.div_exact(&x_minus_y).ok_or_else(|| {
        Error::Consistency("x - y does not cancel: not a multiplicity series".into())
    })?;
    RatFunc::normalize(quotient, den)
}

/// `M'(a(xy) f) = a(v) M'(f)`.
pub fn scale(a: &RatFunc, h: &MSeriesForm) -> Result<MSeriesForm> {
    let a = as_v(a)?;
    MSeriesForm::new(&a * &h.0)
}

/// `Y(h) = (t h(t, v) - v h(v, v)) / ((1 - t)(t - v))`, the image of
/// division by `(1 - x)(1 - y)`.
pub fn op_y(h: &MSeriesForm) -> Result<MSeriesForm> {
    op_ya(h, &RatFunc::one(&tv()))
}

/// `Y_a(h) = (t h(t, v) - a(v) v h(a(v) v, v)) / ((1 - a(v) t)(t - a(v) v))`,
/// the image of division by `(1 - a(xy) x)(1 - a(xy) y)`.
pub fn op_ya(h: &MSeriesForm, a: &RatFunc) -> Result<MSeriesForm> {
    let vars = tv();
    let a = as_v(a)?;
    if !a.is_expandable() {
        return Err(Error::NotExpandable);
    }
    let t = RatFunc::var(&vars, "t")?;
    let v = RatFunc::var(&vars, "v")?;
    let av = &a * &v;
    let shifted = h.0.substitute(&[("t", &av), ("v", &v)])?;
    let combined = &(&t * &h.0) - &(&av * &shifted);

    // a = alpha / beta; t - a v = (beta t - alpha v) / beta, 1 - a t = (beta - alpha t) / beta
    let (alpha, beta) = a.into_parts();
    let tp = Poly::var(&vars, "t")?;
    let vp = Poly::var(&vars, "v")?;
    let linear = &(&beta * &tp) - &(&alpha * &vp);
    let (num, den) = combined.into_parts();
    let quotient = num.div_exact(&linear).ok_or_else(|| {
        Error::Consistency("t - a(v) v does not cancel: not a multiplicity series".into())
    })?;
    let new_den = &den * &(&beta - &(&alpha * &tp));
    MSeriesForm::new(RatFunc::normalize(&quotient * &(&beta * &beta), new_den)?)
}

/// `M'(1/((1-x^2)(1-xy)(1-y^2))) = 1/((1-t^2)(1-v^2))`.
pub fn thrall_base() -> MSeriesForm {
    MSeriesForm::parse("1", "1 - t^2 - v^2 + t^2*v^2").expect("static")
}

/// The stages `w_0, ..., w_4` of the pipeline for `M'(H(T_2))`.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub w0: MSeriesForm,
    pub w1: MSeriesForm,
    pub w2: MSeriesForm,
    pub w3: MSeriesForm,
    pub w4: MSeriesForm,
}

/// `w_0 = thrall_base`, `w_1 = Y_z(w_0)`, `w_2 = Y(w_1)`, `w_3 = Y(w_2)`,
/// `w_4 = w_3 / (1 - v)`.
pub fn pipeline() -> Result<Pipeline> {
    let z = Vars::uni("z");
    let w0 = thrall_base();
    let w1 = op_ya(&w0, &RatFunc::var(&z, "z")?)?;
    let w2 = op_y(&w1)?;
    let w3 = op_y(&w2)?;
    let w4 = scale(&RatFunc::parse(&z, "1", "1 - z")?, &w3)?;
    Ok(Pipeline { w0, w1, w2, w3, w4 })
}

/// `M'(H(T_2))` computed by the operator pipeline.
pub fn mprime_ht2_pipeline() -> Result<MSeriesForm> {
    Ok(pipeline()?.w4)
}

/// The printed pipeline intermediates `w_1, w_2, w_3`.
pub fn printed_intermediates() -> Result<[MSeriesForm; 3]> {
    Ok([
        MSeriesForm::new(printed::w1())?,
        MSeriesForm::new(printed::w2())?,
        MSeriesForm::new(printed::w3(Catalog::standard())?)?,
    ])
}

/// `(h_3 t^3 + h_2 t^2 + h_1 t + h_0) / ((1-v)^7 (1+v)^4 (1+v^2)(1-t)^3 (1+t)(1-vt))`.
pub fn mprime_ht2_closed() -> MSeriesForm {
    mprime_ht2_closed_with(Catalog::standard()).expect("standard constants")
}

pub fn mprime_ht2_closed_with(cat: &Catalog) -> Result<MSeriesForm> {
    let vars = tv();
    let e = &cat.eq8;
    let mut num = Poly::zero(&vars);
    for (i, h) in e.h.iter().enumerate() {
        num = &num + &h.to_poly(&vars, "v")?.mul_monomial([i as u32, 0], &BigRational::one());
    }
    let pow = |f: TFactor, k: i64| -> Result<Poly> {
        let k = u32::try_from(k).map_err(|_| Error::Domain(format!("negative exponent {k}")))?;
        Ok(f.poly(&vars).pow(k))
    };
    let den = &(&(&e.v_den.to_poly(&vars, "v")? * &pow(TFactor::OneMinusT, e.one_minus_t)?)
        * &pow(TFactor::OnePlusT, e.one_plus_t)?)
        * &pow(TFactor::OneMinusVT, e.one_minus_vt)?;
    MSeriesForm::new(RatFunc::normalize(num, den)?)
}

/// The five elementary fractions in `t`, numerators in `v`.
pub fn mprime_ht2_elementary() -> PartialFractionT {
    mprime_ht2_elementary_with(Catalog::standard()).expect("standard constants")
}

pub fn mprime_ht2_elementary_with(cat: &Catalog) -> Result<PartialFractionT> {
    let v = Vars::uni("v");
    let terms = cat
        .eq9
        .iter()
        .map(|term| {
            let power = u32::try_from(term.power)
                .map_err(|_| Error::Domain(format!("negative pole order {}", term.power)))?;
            Ok((PoleT { factor: term.factor, power }, term.coefficient(&v, "v")?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PartialFractionT { terms })
}

/// Coefficient of `t^p v^q` in the Maclaurin expansion.
pub fn mseries_coeff(h: &MSeriesForm, p: u32, q: u32) -> BigRational {
    let grid = expand_rect(&h.0, p, q).expect("forms are expandable over (t, v)");
    grid[p as usize][q as usize].clone()
}
