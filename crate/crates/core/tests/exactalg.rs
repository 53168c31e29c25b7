use cochar_core::constants::Catalog;
use cochar_core::exactalg::rational::int;
use cochar_core::exactalg::*;
use cochar_core::mseries::{mprime_ht2_closed, mprime_ht2_elementary, pipeline};
use cochar_core::series::{expand, TruncSeries2};
use proptest::prelude::*;

fn tv() -> Vars {
    Vars::bi("t", "v")
}

fn v() -> Vars {
    Vars::uni("v")
}

fn poly(vars: &Vars, s: &str) -> Poly {
    Poly::parse(vars, s).unwrap()
}

fn poly_strategy(vars: Vars, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    let two = vars.len() == 2;
    prop::collection::vec((0..=max_deg, 0..=max_deg, -4i64..=4, 1i64..=3), 0..=max_terms).prop_map(
        move |terms| {
            Poly::from_terms(
                &vars,
                terms.into_iter().filter(|(i, j, _, _)| i + j <= max_deg).map(|(i, j, n, d)| {
                    let e = if two { [i, j] } else { [i + j, 0] };
                    (e, rat(n, d))
                }),
            )
        },
    )
}

fn ratfunc_strategy() -> impl Strategy<Value = RatFunc> {
    (poly_strategy(tv(), 3, 4), poly_strategy(tv(), 3, 4))
        .prop_filter_map("nonzero denominator", |(n, d)| RatFunc::normalize(n, d).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normalize_is_idempotent(f in ratfunc_strategy()) {
        let (n, d) = f.clone().into_parts();
        let again = normalize(n.clone(), d.clone()).unwrap();
        prop_assert_eq!(again.num(), &n);
        prop_assert_eq!(again.den(), &d);
    }

    #[test]
    fn add_then_subtract(f in ratfunc_strategy(), g in ratfunc_strategy()) {
        let back = &(&f + &g) - &g;
        prop_assert_eq!(back.num(), f.num());
        prop_assert_eq!(back.den(), f.den());
    }

    #[test]
    fn multiply_then_divide(f in ratfunc_strategy(), g in ratfunc_strategy()) {
        prop_assume!(!g.is_zero());
        let back = (&f * &g).checked_div(&g).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn substitution_round_trip(f in ratfunc_strategy()) {
        let sv = Vars::bi("s", "v");
        let s = RatFunc::var(&sv, "s").unwrap();
        let t = RatFunc::var(&tv(), "t").unwrap();
        let there = f.substitute(&[("t", &s)]).unwrap();
        let back = there.substitute(&[("s", &t)]).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn v_decomposition_recombines(
        num in poly_strategy(v(), 8, 6),
        a in 0u32..=4,
        b in 0u32..=4,
        c in 0u32..=1,
    ) {
        let den = &(&poly(&v(), "1 - v").pow(a) * &poly(&v(), "1 + v").pow(b)) * &poly(&v(), "1 + v^2").pow(c);
        let f = RatFunc::normalize(num, den).unwrap();
        let pf = partial_fractions_v(&f).unwrap();
        prop_assert_eq!(pf.recombine(), f);
    }

    #[test]
    fn t_decomposition_recombines(
        num in poly_strategy(tv(), 8, 6),
        a in 0u32..=3,
        b in 0u32..=2,
        c in 0u32..=2,
        k in 0u32..=3,
    ) {
        prop_assume!(a + b + c > 0);
        let factors: Vec<(TFactor, u32)> = [(TFactor::OneMinusT, a), (TFactor::OnePlusT, b), (TFactor::OneMinusVT, c)]
            .into_iter()
            .filter(|(_, m)| *m > 0)
            .collect();
        // keep the numerator's t-degree below the pole order
        let order = a + b + c;
        let num = Poly::from_terms(&tv(), num.terms().filter(|(e, _)| e[0] < order).map(|(e, c)| (*e, c.clone())));
        let mut den = poly(&tv(), "1 - v").pow(k);
        for (f, m) in &factors {
            den = &den * &f.poly(&tv()).pow(*m);
        }
        let f = RatFunc::normalize(num, den).unwrap();
        // after reduction, pass only the factors that survive in the denominator
        let surviving: Vec<(TFactor, u32)> = factors
            .iter()
            .filter_map(|(fac, m)| {
                let p = fac.poly(&tv());
                let mut d = f.den().clone();
                let mut k = 0;
                while k < *m {
                    match d.div_exact(&p) {
                        Some(q) => { d = q; k += 1; }
                        None => break,
                    }
                }
                (k > 0).then_some((*fac, k))
            })
            .collect();
        prop_assume!(!surviving.is_empty());
        let pf = partial_fractions_t(&f, &surviving).unwrap();
        prop_assert_eq!(pf.recombine(), f);
    }

    #[test]
    fn binomial_coefficients_match_division(k in 0u64..=12, m in 0u64..=12) {
        let z = Vars::bi("x", "y");
        let f = RatFunc::normalize(Poly::one(&z), poly(&z, "1 - x").pow(k as u32 + 1)).unwrap();
        let s = expand(&f, 12).unwrap();
        prop_assert_eq!(s.coeff(m as u32, 0).unwrap(), binomial_series_coeff(k, m));
    }
}

#[test]
fn normalize_examples() {
    let f = normalize(poly(&tv(), "t^2 - v^2"), poly(&tv(), "t - v")).unwrap();
    assert_eq!(f.num(), &poly(&tv(), "t + v"));
    assert!(f.den().is_one());
    let g = normalize(poly(&tv(), "2*t"), poly(&tv(), "4")).unwrap();
    assert_eq!(g.num(), &poly(&tv(), "1/2*t"));

    let h = mprime_ht2_closed().into_inner();
    let (n, d) = h.clone().into_parts();
    let one_minus_t = poly(&tv(), "1 - t");
    let padded = normalize(&n * &one_minus_t, &d * &one_minus_t).unwrap();
    assert_eq!(padded.num(), h.num());
    assert_eq!(padded.den(), h.den());
}

#[test]
fn substitution_examples() {
    let f = RatFunc::parse(&tv(), "1", "1 - t").unwrap();
    let vv = RatFunc::var(&tv(), "v").unwrap();
    assert_eq!(f.substitute(&[("t", &vv)]).unwrap(), RatFunc::parse(&tv(), "1", "1 - v").unwrap());

    let xy = Vars::bi("x", "y");
    let x = RatFunc::var(&xy, "x").unwrap();
    let prod = &x * &RatFunc::var(&xy, "y").unwrap();
    let base = RatFunc::parse(&tv(), "1", "1 - t^2 - v^2 + t^2*v^2").unwrap();
    let got = base.substitute(&[("t", &x), ("v", &prod)]).unwrap();
    let want = RatFunc::normalize(Poly::one(&xy), &poly(&xy, "1 - x^2") * &poly(&xy, "1 - x^2*y^2")).unwrap();
    assert_eq!(got, want);

    // w1 at t = v against the unreduced form, compared as series
    let w1 = pipeline().unwrap().w1.into_inner();
    let diag = w1.substitute(&[("t", &vv)]).unwrap();
    let p = |s: &str| poly(&tv(), s);
    let unreduced = RatFunc::normalize(
        p("1 + v^3"),
        &(&p("1 - v^2").pow(4) * &p("1 + v^2")) * &Poly::one(&tv()),
    )
    .unwrap();
    let as_xy = |f: &RatFunc| {
        let r = f.substitute(&[("t", &RatFunc::var(&xy, "x").unwrap()), ("v", &RatFunc::var(&xy, "y").unwrap())]).unwrap();
        expand(&r, 20).unwrap()
    };
    assert_eq!(as_xy(&diag), as_xy(&unreduced));
}

#[test]
fn substitution_into_vanishing_denominator_fails() {
    let f = RatFunc::parse(&tv(), "1", "t - v").unwrap();
    let vv = RatFunc::var(&tv(), "v").unwrap();
    assert!(matches!(f.substitute(&[("t", &vv)]), Err(cochar_core::Error::Domain(_))));
}

#[test]
fn decomposition_of_the_single_fraction() {
    let f = mprime_ht2_closed().into_inner();
    let factors = [(TFactor::OneMinusT, 3), (TFactor::OnePlusT, 1), (TFactor::OneMinusVT, 1)];
    let pf = partial_fractions_t(&f, &factors).unwrap();
    let listed = mprime_ht2_elementary();
    assert_eq!(pf.terms.len(), 5);
    for (pole, numer) in &listed.terms {
        assert_eq!(pf.numerator(pole.factor, pole.power), Some(numer), "{}^{}", pole.factor, pole.power);
    }
    let a3 = pf.numerator(TFactor::OneMinusT, 3).unwrap();
    assert_eq!(a3.eval(&[int(0)]).unwrap(), rat(1, 2));
}

#[test]
fn small_t_decompositions() {
    let f = RatFunc::parse(&tv(), "1", "1 - t^2").unwrap();
    let pf = partial_fractions_t(&f, &[(TFactor::OneMinusT, 1), (TFactor::OnePlusT, 1)]).unwrap();
    let half = RatFunc::constant(&v(), rat(1, 2));
    assert_eq!(pf.numerator(TFactor::OneMinusT, 1), Some(&half));
    assert_eq!(pf.numerator(TFactor::OnePlusT, 1), Some(&half));

    let w2 = pipeline().unwrap().w2.into_inner();
    let pf = partial_fractions_t(
        &w2,
        &[(TFactor::OneMinusT, 2), (TFactor::OnePlusT, 1), (TFactor::OneMinusVT, 1)],
    )
    .unwrap();
    assert_eq!(pf.terms.len(), 4);
    assert_eq!(pf.recombine(), w2);
}

#[test]
fn small_v_decompositions() {
    let cat = Catalog::standard();
    let a3 = cat.eq9[0].coefficient(&v(), "v").unwrap();
    let pf = partial_fractions_v(&a3).unwrap();
    let want = [
        (VBasis::OneMinusV(6), rat(1, 8)),
        (VBasis::OneMinusV(5), rat(1, 8)),
        (VBasis::OneMinusV(4), rat(3, 32)),
        (VBasis::OneMinusV(3), rat(1, 16)),
        (VBasis::OneMinusV(2), rat(5, 128)),
        (VBasis::OneMinusV(1), rat(3, 128)),
        (VBasis::OnePlusV(2), rat(1, 128)),
        (VBasis::OnePlusV(1), rat(3, 128)),
    ];
    for (b, c) in &want {
        assert_eq!(&pf.coeff(*b), c, "{b}");
    }
    assert_eq!(pf.coefficients.values().filter(|c| **c != rat(0, 1)).count(), want.len());

    let b = cat.eq9[3].coefficient(&v(), "v").unwrap();
    assert_eq!(partial_fractions_v(&b).unwrap().coeff(VBasis::VOverOnePlusV2), rat(-1, 64));

    let f = RatFunc::parse(&v(), "1", "1 - v^2").unwrap();
    let pf = partial_fractions_v(&f).unwrap();
    assert_eq!(pf.coeff(VBasis::OneMinusV(1)), rat(1, 2));
    assert_eq!(pf.coeff(VBasis::OnePlusV(1)), rat(1, 2));
}

#[test]
fn binomial_examples() {
    assert_eq!(binomial_series_coeff(0, 9), int(1));
    assert_eq!(binomial_series_coeff(1, 3), int(4));
    assert_eq!(binomial_series_coeff(5, 7), int(792));
}

#[test]
fn truncated_product_is_a_ring_morphism() {
    let xy = Vars::bi("x", "y");
    let f = RatFunc::parse(&xy, "1 + x", "1 - x*y - y^2").unwrap();
    let g = RatFunc::parse(&xy, "2 - y", "1 + 3*x").unwrap();
    let n = 10;
    let lhs = expand(&(&f * &g), n).unwrap();
    let rhs: TruncSeries2 = expand(&f, n).unwrap().mul(&expand(&g, n).unwrap());
    assert_eq!(lhs, rhs);
}
