//! The full verification suite, parameterized by a constants catalog so that
//! corrupted constants can be shown to be caught.

use num_rational::BigRational;
use serde::Serialize;
use std::time::{Duration, Instant};

use crate::closedform::{lemma3_reassemble_with, multiplicity_with};
use crate::constants::{printed, Catalog};
use crate::error::Result;
use crate::exactalg::{partial_fractions_v, BigInt, Poly, RatFunc, Vars};
use crate::mseries::{
    mprime_ht2_closed_with, mprime_ht2_elementary_with, pipeline, reconstruct, thrall_base,
};
use crate::series::{expand, hilbert_t2, oracle_table, Partition2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CheckId {
    /// Single-fraction form equals the recombined elementary fractions.
    DualForm,
    /// Reconstruction of the single-fraction form is the Hilbert series.
    Reconstruction,
    /// Operator pipeline reproduces every printed stage.
    Pipeline,
    /// The base case reconstructs to `1/((1-x^2)(1-xy)(1-y^2))`.
    ThrallBase,
    /// The listed `v`-expansions of the elementary-fraction numerators.
    VExpansions,
    /// Closed formula against the brute-force oracle.
    Oracle,
    /// Four-sum series against the expansion of the single fraction.
    Reassembly,
}

impl CheckId {
    pub const ALL: [CheckId; 7] = [
        CheckId::DualForm,
        CheckId::Reconstruction,
        CheckId::Pipeline,
        CheckId::ThrallBase,
        CheckId::VExpansions,
        CheckId::Oracle,
        CheckId::Reassembly,
    ];

    pub fn letter(self) -> char {
        match self {
            CheckId::DualForm => 'a',
            CheckId::Reconstruction => 'b',
            CheckId::Pipeline => 'c',
            CheckId::ThrallBase => 'd',
            CheckId::VExpansions => 'e',
            CheckId::Oracle => 'f',
            CheckId::Reassembly => 'g',
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            CheckId::DualForm => "single fraction equals elementary fractions",
            CheckId::Reconstruction => "reconstruction gives the Hilbert series",
            CheckId::Pipeline => "pipeline w1..w4 matches the printed stages",
            CheckId::ThrallBase => "base case reconstruction",
            CheckId::VExpansions => "partial fractions in v of a3, a2, a1, b, c",
            CheckId::Oracle => "closed formula equals oracle",
            CheckId::Reassembly => "four-sum series equals expansion",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: CheckId,
    pub passed: bool,
    /// First counterexample or error, when failed.
    pub detail: Option<String>,
    #[serde(serialize_with = "ser_ms")]
    pub elapsed: Duration,
}

fn ser_ms<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1000.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub degree: u32,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// `Ok(None)` on success, `Ok(Some(counterexample))` on failure.
pub type Outcome = Result<Option<String>>;

fn timed(id: CheckId, f: impl FnOnce() -> Outcome) -> Check {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(None) => (true, None),
        Ok(Some(why)) => (false, Some(why)),
        Err(e) => (false, Some(format!("error: {e}"))),
    };
    Check { id, passed, detail, elapsed: start.elapsed() }
}

/// Runs one check; `degree` matters for the oracle and reassembly checks.
pub fn run_check(cat: &Catalog, id: CheckId, degree: u32) -> Check {
    timed(id, || match id {
        CheckId::DualForm => dual_form(cat),
        CheckId::Reconstruction => reconstruction(cat),
        CheckId::Pipeline => pipeline_stages(cat),
        CheckId::ThrallBase => thrall(),
        CheckId::VExpansions => v_expansions(cat),
        CheckId::Oracle => oracle(cat, degree),
        CheckId::Reassembly => reassembly(cat, degree),
    })
}

pub fn run(cat: &Catalog, degree: u32) -> Report {
    Report { degree, checks: CheckId::ALL.iter().map(|&id| run_check(cat, id, degree)).collect() }
}

pub fn dual_form(cat: &Catalog) -> Outcome {
    let closed = mprime_ht2_closed_with(cat)?;
    let elementary = mprime_ht2_elementary_with(cat)?.recombine();
    Ok((!closed.value().cross_eq(&elementary))
        .then(|| format!("{} != {}", closed.value(), elementary)))
}

pub fn reconstruction(cat: &Catalog) -> Outcome {
    let f = reconstruct(&mprime_ht2_closed_with(cat)?)?;
    let h = hilbert_t2();
    Ok((f != h).then(|| format!("reconstruction gives {f}, expected {h}")))
}

fn pipeline_stages(cat: &Catalog) -> Outcome {
    let p = pipeline()?;
    let expected = [
        ("w1", printed::w1()),
        ("w2", printed::w2()),
        ("w3", printed::w3(cat)?),
        ("w4", mprime_ht2_closed_with(cat)?.into_inner()),
    ];
    let got = [&p.w1, &p.w2, &p.w3, &p.w4];
    for ((name, want), have) in expected.iter().zip(got) {
        if have.value() != want {
            return Ok(Some(format!("{name}: computed {have}, printed {want}")));
        }
    }
    Ok(None)
}

fn thrall() -> Outcome {
    let vars = Vars::bi("x", "y");
    let p = |s: &str| Poly::parse(&vars, s);
    let den = &(&p("1 - x^2")? * &p("1 - x*y")?) * &p("1 - y^2")?;
    let want = RatFunc::normalize(p("1")?, den)?;
    let got = reconstruct(&thrall_base())?;
    Ok((got != want).then(|| format!("got {got}, expected {want}")))
}

fn v_expansions(cat: &Catalog) -> Outcome {
    let v = Vars::uni("v");
    for (term, listed) in cat.eq9.iter().zip(&cat.v_expansions) {
        let pf = partial_fractions_v(&term.coefficient(&v, "v")?)?;
        if !pf.polynomial.is_zero() {
            return Ok(Some(format!("{}: polynomial part {}", listed.name, pf.polynomial)));
        }
        let mut expected = std::collections::BTreeMap::new();
        for &(basis, n, d) in &listed.terms {
            if d == 0 {
                return Ok(Some(format!("{}: zero denominator in listed {basis}", listed.name)));
            }
            expected.insert(basis, BigRational::new(n.into(), d.into()));
        }
        for basis in expected.keys().chain(pf.coefficients.keys()) {
            let want = expected.get(basis).cloned().unwrap_or_default();
            let have = pf.coeff(*basis);
            if want != have {
                return Ok(Some(format!(
                    "{}: coefficient of {basis} is {have}, listed {want}",
                    listed.name
                )));
            }
        }
    }
    Ok(None)
}

fn oracle(cat: &Catalog, degree: u32) -> Outcome {
    oracle_against(cat, &oracle_table(degree))
}

/// The oracle check against precomputed oracle values.
pub fn oracle_against(cat: &Catalog, table: &[(Partition2, BigInt)]) -> Outcome {
    for (l, m) in table.iter().cloned() {
        match multiplicity_with(cat, l) {
            Ok(c) if c == m => {}
            Ok(c) => return Ok(Some(format!("{l}: closed formula {c}, oracle {m}"))),
            Err(e) => return Ok(Some(format!("{l}: {e}; oracle {m}"))),
        }
    }
    Ok(None)
}

pub fn reassembly(cat: &Catalog, degree: u32) -> Outcome {
    let sums = lemma3_reassemble_with(cat, degree)?;
    let series = expand(mprime_ht2_closed_with(cat)?.value(), degree)?;
    for i in 0..=degree {
        for j in 0..=(degree - i) {
            let (a, b) = (sums.coeff(i, j)?, series.coeff(i, j)?);
            if a != b {
                return Ok(Some(format!("t^{i} v^{j}: four sums give {a}, expansion {b}")));
            }
        }
    }
    Ok(None)
}

/// Closed formula values at every partition of size at most `degree`, as
/// integers; used by table emitters that want the whole range at once.
pub fn closed_table(cat: &Catalog, degree: u32) -> Result<Vec<(Partition2, BigInt)>> {
    Partition2::up_to(u64::from(degree))
        .into_iter()
        .map(|l| Ok((l, multiplicity_with(cat, l)?)))
        .collect()
}
