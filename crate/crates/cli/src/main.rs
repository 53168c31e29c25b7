//! `cochar`: multiplicities of the mixed trace cocharacter of two generic
//! 3x3 matrices, from the closed formula, the series, or brute force.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
//! 3 I/O error. Data goes to stdout, diagnostics to stderr.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::value::RawValue;

use cochar_core::closedform::{self, Lemma3Kind};
use cochar_core::constants::Catalog;
use cochar_core::exactalg::rational::{decimal_approx, format_rational};
use cochar_core::exactalg::BigRational;
use cochar_core::mseries::{mprime_ht2_closed, mprime_ht2_elementary, mseries_coeff};
use cochar_core::series::{expand, hilbert_t2, HILBERT_T2_FACTORS, oracle_multiplicity, oracle_table, Partition2};
use cochar_core::verify;
use cochar_core::Error;

#[derive(Parser)]
#[command(name = "cochar", version, about = "Mixed trace cocharacter multiplicities of two generic 3x3 matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    /// Closed formula in (p, q) = (l1 - l2, l2).
    Closed,
    /// Brute-force expansion of the Hilbert series.
    Oracle,
    /// Coefficient of the multiplicity series.
    Series,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TextOrJson {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Multiplicity of one partition (l1, l2).
    Mult {
        lambda1: u64,
        lambda2: u64,
        #[arg(long, value_enum, default_value = "closed")]
        method: Method,
        #[arg(long, value_enum, default_value = "text")]
        format: TextOrJson,
    },
    /// Multiplicities of all partitions with l1 + l2 <= degree.
    Table {
        #[arg(long)]
        degree: u32,
        #[arg(long, value_enum, default_value = "closed")]
        method: Method,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every identity check up to the given degree.
    Verify {
        #[arg(long, default_value_t = 40)]
        degree: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: TextOrJson,
        /// Bump a named constant by one before checking (fault injection).
        #[arg(long, hide = true)]
        perturb: Vec<String>,
    },
    /// Multiplicity against its leading-order term.
    Asym { lambda1: u64, lambda2: u64 },
    /// Multiplicity in the ordinary cocharacter, for mu3 = ... = mu9 >= 2.
    Ordinary {
        #[arg(num_args = 9, required = true)]
        mu: Vec<u64>,
    },
    /// Print the closed forms and the coefficient constants.
    Forms {
        #[arg(long, value_enum, default_value = "text")]
        format: TextOrJson,
    },
}

enum Failure {
    Verification(String),
    Usage(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Usage(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Consistency(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// One row of `table --format json`; same keys as the CSV header.
#[derive(Serialize)]
struct Row {
    lambda1: u64,
    lambda2: u64,
    multiplicity: Box<RawValue>,
}

/// What `mult --format json` prints.
#[derive(Serialize)]
struct OutputRecord {
    lambda1: u64,
    lambda2: u64,
    value: Box<RawValue>,
    method: Method,
}

/// Big integers go into JSON as plain numbers of any length.
fn raw_int(n: &BigInt) -> Box<RawValue> {
    RawValue::from_string(n.to_string()).expect("decimal digits are valid JSON")
}

fn partition(l1: u64, l2: u64) -> Result<Partition2, Failure> {
    Partition2::new(l1, l2).map_err(Failure::from)
}

fn single(l: Partition2, method: Method) -> Result<BigInt, Failure> {
    Ok(match method {
        Method::Closed => closedform::multiplicity(l)?,
        Method::Oracle => oracle_multiplicity(l),
        Method::Series => {
            let (p, q) = (index(l.p())?, index(l.lambda2())?);
            integral(mseries_coeff(&mprime_ht2_closed(), p, q), l)?
        }
    })
}

fn index(x: u64) -> Result<u32, Failure> {
    u32::try_from(x).map_err(|_| Failure::Usage(format!("{x} is too large for the series method")))
}

fn integral(r: BigRational, l: Partition2) -> Result<BigInt, Failure> {
    if !r.is_integer() || r.is_negative() {
        return Err(Failure::Verification(format!("series coefficient {r} at {l} is not a count")));
    }
    Ok(r.to_integer())
}

fn table(degree: u32, method: Method) -> Result<Vec<(Partition2, BigInt)>, Failure> {
    match method {
        Method::Closed => Partition2::up_to(u64::from(degree))
            .into_par_iter()
            .map(|l| Ok((l, closedform::multiplicity(l)?)))
            .collect(),
        Method::Oracle => Ok(oracle_table(degree)),
        Method::Series => {
            let s = expand(mprime_ht2_closed().value(), degree)?;
            Partition2::up_to(u64::from(degree))
                .into_par_iter()
                .map(|l| {
                    let c = s.coeff(l.p() as u32, l.lambda2() as u32)?;
                    Ok((l, integral(c, l)?))
                })
                .collect()
        }
    }
}

fn render_table(rows: &[(Partition2, BigInt)], format: TableFormat) -> String {
    match format {
        TableFormat::Csv => {
            let mut s = String::from("lambda1,lambda2,multiplicity\n");
            for (l, m) in rows {
                let _ = writeln!(s, "{},{},{m}", l.lambda1(), l.lambda2());
            }
            s
        }
        TableFormat::Json => {
            let records: Vec<Row> = rows
                .iter()
                .map(|(l, m)| Row { lambda1: l.lambda1(), lambda2: l.lambda2(), multiplicity: raw_int(m) })
                .collect();
            serde_json::to_string_pretty(&records).expect("serializable") + "\n"
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Outcome {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn print(text: &str) -> Outcome {
    emit(&None, text)
}

fn cmd_verify(degree: u32, format: TextOrJson, perturb: &[String]) -> Outcome {
    if degree < 2 {
        return Err(Failure::Usage(format!("--degree must be at least 2, got {degree}")));
    }
    let mut cat = Catalog::standard().clone();
    for name in perturb {
        cat = cat.perturbed(name, 1)?;
    }
    let report = verify::run(&cat, degree);
    let text = match format {
        TextOrJson::Json => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
        TextOrJson::Text => {
            let mut s = String::new();
            for c in &report.checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    s,
                    "{status} ({}) {} [{:.1} ms]",
                    c.id.letter(),
                    c.id.title(),
                    c.elapsed.as_secs_f64() * 1000.0
                );
            }
            s
        }
    };
    print(&text)?;
    match report.first_failure() {
        None => Ok(()),
        Some(c) => Err(Failure::Verification(format!(
            "check ({}) {} failed: {}",
            c.id.letter(),
            c.id.title(),
            c.detail.as_deref().unwrap_or("no detail")
        ))),
    }
}

fn cmd_asym(l: Partition2) -> Outcome {
    let m = closedform::multiplicity(l)?;
    let main = closedform::asymptotic_main(l);
    let diff = BigRational::from_integer(m.clone()) - &main;
    let scale = num_traits::pow(BigInt::from(l.degree()), 6);
    let mut s = String::new();
    let _ = writeln!(s, "lambda: {l}");
    let _ = writeln!(s, "multiplicity: {m}");
    let _ = writeln!(s, "main_term: {}", format_rational(&main));
    let _ = writeln!(s, "difference: {}", format_rational(&diff));
    if scale.is_zero() {
        let _ = writeln!(s, "ratio: undefined (lambda1 + lambda2 = 0)");
    } else {
        let ratio = diff / BigRational::from_integer(scale);
        let _ = writeln!(s, "ratio: {}", format_rational(&ratio));
        let _ = writeln!(s, "ratio_approx: {}", decimal_approx(&ratio, 12));
    }
    print(&s)
}

fn cmd_ordinary(mu: &[u64]) -> Outcome {
    match closedform::ordinary_multiplicity(mu) {
        Ok(m) => print(&format!("{m}\n")),
        Err(Error::OutOfScope(msg)) => Err(Failure::Usage(msg)),
        Err(e) => Err(e.into()),
    }
}

#[derive(Serialize)]
struct Forms {
    hilbert_series: Fraction,
    multiplicity_series: Fraction,
    elementary_fractions: Vec<Elementary>,
    coefficients: Vec<Coefficient>,
    corrections: Corrections,
}

#[derive(Serialize)]
struct Fraction {
    variables: Vec<String>,
    numerator: String,
    denominator: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    denominator_factored: Option<String>,
}

#[derive(Serialize)]
struct Elementary {
    pole: String,
    numerator: Fraction,
}

#[derive(Serialize)]
struct Coefficient {
    name: &'static str,
    arguments: &'static str,
    /// Sum of `coefficient * arg1^i * arg2^j / den` blocks.
    blocks: Vec<Block>,
}

#[derive(Serialize)]
struct Block {
    terms: Vec<(i64, [u32; 2])>,
    den: i64,
}

#[derive(Serialize)]
struct Corrections {
    odd_q: String,
    even_s: String,
}

fn fraction(f: &cochar_core::exactalg::RatFunc) -> Fraction {
    Fraction {
        variables: f.vars().names().to_vec(),
        numerator: f.num().to_string(),
        denominator: f.den().to_string(),
        denominator_factored: None,
    }
}

fn factored(factors: &[(&str, i64)]) -> String {
    factors
        .iter()
        .filter(|(_, k)| *k != 0)
        .map(|(f, k)| if *k == 1 { format!("({f})") } else { format!("({f})^{k}") })
        .collect::<Vec<_>>()
        .join(" * ")
}

fn hilbert_factored() -> String {
    let monomial = |[i, j]: [u32; 2]| match (i, j) {
        (0, 0) => "1".to_string(),
        (i, 0) => format!("x{}", sup(i)),
        (0, j) => format!("y{}", sup(j)),
        (i, j) => format!("x{}*y{}", sup(i), sup(j)),
    };
    let parts: Vec<(String, i64)> =
        HILBERT_T2_FACTORS.iter().map(|(m, k)| (format!("1 - {}", monomial(*m)), i64::from(*k))).collect();
    factored(&parts.iter().map(|(f, k)| (f.as_str(), *k)).collect::<Vec<_>>())
}

fn sup(k: u32) -> String {
    if k == 1 { String::new() } else { format!("^{k}") }
}

fn forms() -> Forms {
    let cat = Catalog::standard();
    let l = &cat.lemma3;
    let blocks = |k: Lemma3Kind| {
        let p = match k {
            Lemma3Kind::APlus => &l.a_plus,
            Lemma3Kind::AMinus => &l.a_minus,
            Lemma3Kind::BPlus => &l.b_plus,
            Lemma3Kind::BMinus => &l.b_minus,
            Lemma3Kind::CPlus => &l.c_plus,
            Lemma3Kind::CMinus => &l.c_minus,
        };
        p.0.iter().map(|b| Block { terms: b.terms.clone(), den: b.den }).collect()
    };
    let args = |k: Lemma3Kind| match k.arity() {
        2 => "(p, q)",
        _ if matches!(k, Lemma3Kind::CPlus | Lemma3Kind::CMinus) => "(_, s)",
        _ => "(_, q)",
    };
    let e = &cat.eq8;
    let m_den = factored(&[
        ("1 - v", e.v_den.one_minus_v),
        ("1 + v", e.v_den.one_plus_v),
        ("1 + v^2", e.v_den.one_plus_v2),
        ("1 - t", e.one_minus_t),
        ("1 + t", e.one_plus_t),
        ("1 - v*t", e.one_minus_vt),
    ]);
    Forms {
        hilbert_series: Fraction { denominator_factored: Some(hilbert_factored()), ..fraction(&hilbert_t2()) },
        multiplicity_series: Fraction {
            denominator_factored: Some(m_den),
            ..fraction(mprime_ht2_closed().value())
        },
        elementary_fractions: mprime_ht2_elementary()
            .terms
            .iter()
            .map(|(pole, n)| Elementary {
                pole: format!("{}^{}", pole.factor, pole.power),
                numerator: fraction(n),
            })
            .collect(),
        coefficients: Lemma3Kind::ALL
            .iter()
            .map(|&k| Coefficient { name: k.name(), arguments: args(k), blocks: blocks(k) })
            .collect(),
        corrections: Corrections {
            odd_q: format!("-{}/{} * (-1)^(p+r) at t^p v^(2r+1)", l.eps1.0, l.eps1.1),
            even_s: format!("+{}/{} * (-1)^w at (tv)^p v^(2w)", l.eps2.0, l.eps2.1),
        },
    }
}

fn render_forms_text(f: &Forms) -> String {
    let mut s = String::new();
    let frac = |x: &Fraction| match &x.denominator_factored {
        Some(d) => format!("({}) / ({})", x.numerator, d),
        None => format!("({}) / ({})", x.numerator, x.denominator),
    };
    let _ = writeln!(s, "H(x,y) = {}", frac(&f.hilbert_series));
    let _ = writeln!(s, "M'(t,v) = {}", frac(&f.multiplicity_series));
    let _ = writeln!(s, "M'(t,v) = sum of:");
    for e in &f.elementary_fractions {
        let _ = writeln!(s, "  {} / {}", frac(&e.numerator), e.pole);
    }
    let _ = writeln!(s, "coefficients, each a sum of c * arg1^i * arg2^j / den:");
    for c in &f.coefficients {
        let blocks: Vec<String> = c
            .blocks
            .iter()
            .map(|b| {
                let terms: Vec<String> =
                    b.terms.iter().map(|(c, [i, j])| format!("{c}*[{i},{j}]")).collect();
                format!("({})/{}", terms.join(" + "), b.den)
            })
            .collect();
        let _ = writeln!(s, "  {}{} = {}", c.name, c.arguments, blocks.join(" + "));
    }
    let _ = writeln!(s, "corrections:");
    let _ = writeln!(s, "  {}", f.corrections.odd_q);
    let _ = writeln!(s, "  {}", f.corrections.even_s);
    s
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Mult { lambda1, lambda2, method, format } => {
            let l = partition(lambda1, lambda2)?;
            let m = single(l, method)?;
            match format {
                TextOrJson::Text => print(&format!("{m}\n")),
                TextOrJson::Json => {
                    let r = OutputRecord { lambda1, lambda2, value: raw_int(&m), method };
                    print(&(serde_json::to_string(&r).expect("serializable") + "\n"))
                }
            }
        }
        Command::Table { degree, method, format, out } => {
            let rows = table(degree, method)?;
            emit(&out, &render_table(&rows, format))
        }
        Command::Verify { degree, format, perturb } => cmd_verify(degree, format, &perturb),
        Command::Asym { lambda1, lambda2 } => cmd_asym(partition(lambda1, lambda2)?),
        Command::Ordinary { mu } => cmd_ordinary(&mu),
        Command::Forms { format } => {
            let f = forms();
            match format {
                TextOrJson::Text => print(&render_forms_text(&f)),
                TextOrJson::Json => print(&(serde_json::to_string_pretty(&f).expect("serializable") + "\n")),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("cochar: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cochar_core::exactalg::{Poly, Vars};

    fn product(text: &str, vars: &Vars) -> Poly {
        text.split(" * ").fold(Poly::one(vars), |acc, part| {
            let (base, k) = match part.rsplit_once(")^") {
                Some((b, k)) => (b.trim_start_matches('('), k.parse().unwrap()),
                None => (part.trim_start_matches('(').trim_end_matches(')'), 1),
            };
            &acc * &Poly::parse(vars, base).unwrap().pow(k)
        })
    }

    #[test]
    fn factored_denominators_expand_to_the_reduced_ones() {
        let f = forms();
        for (frac, vars) in [
            (&f.hilbert_series, Vars::bi("x", "y")),
            (&f.multiplicity_series, Vars::bi("t", "v")),
        ] {
            let den = Poly::parse(&vars, &frac.denominator).unwrap();
            assert_eq!(product(frac.denominator_factored.as_deref().unwrap(), &vars), den);
        }
    }
}
