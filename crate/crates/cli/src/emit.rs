//! Report rendering: JSON, aligned tables and per-degree CSV.

use std::fmt::Write;
use std::str::FromStr;

use pertinency::series::Growth;
use pertinency::smash::{Pertinency, PertinencyReport};

use crate::config::{FieldSpec, GroupKind, NamedQ, QSpec, SmashKindSpec};
use crate::run::{Outcome, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Table,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format {s:?}; expected json, table or csv")),
        }
    }
}

pub const CSV_HEADER: &str = "degree,dim_B,dim_I,h";

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Table => to_table(report),
        Format::Csv => to_csv(report),
    }
}

pub fn to_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<Report, serde_json::Error> {
    serde_json::from_str(text)
}

/// One row per degree of the pertinency task; only the header when the
/// task did not run or failed.
pub fn to_csv(report: &Report) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    if let Some(Outcome::Ok { result: p }) = &report.results.pertinency {
        for d in 0..p.hilbert_quotient.len() {
            writeln!(out, "{d},{},{},{}", p.dims_b[d], p.dims_i[d], p.hilbert_quotient[d]).unwrap();
        }
    }
    out
}

pub fn classification_line(g: &Growth) -> String {
    match g {
        Growth::CertifiedZero { degree } => format!("certified_finite at degree {degree}"),
        Growth::Polynomial { m } => format!("estimated({m})"),
        Growth::Inconclusive => "inconclusive".into(),
    }
}

/// Right-aligned columns under a header.
fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..headers.len())
        .map(|c| rows.iter().map(|r| r[c].chars().count()).chain([headers[c].len()]).max().unwrap_or(0))
        .collect();
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(headers.to_vec());
    for r in rows {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}

fn section<T>(out: &mut String, name: &str, outcome: &Option<Outcome<T>>, body: impl FnOnce(&mut String, &T)) {
    let Some(outcome) = outcome else { return };
    writeln!(out, "\n== {name} ==").unwrap();
    match outcome {
        Outcome::Ok { result } => body(out, result),
        Outcome::Error { message } => writeln!(out, "error: {message}").unwrap(),
    }
}

fn describe(report: &Report) -> String {
    let c = &report.config;
    let ring = match &c.ring.q {
        QSpec::Named(NamedQ::MinusOne) => format!("k_-1[x1..x{}]", c.ring.n),
        QSpec::Named(NamedQ::Commutative) => format!("k[x1..x{}]", c.ring.n),
        QSpec::Matrix(_) => format!("k_q[x1..x{}]", c.ring.n),
    };
    let field = match c.field {
        FieldSpec::Rational => "Q".to_string(),
        FieldSpec::Cyclotomic { n } => format!("Q(zeta_{n})"),
        FieldSpec::Prime { p } => format!("GF({p})"),
    };
    let group = match c.group.kind {
        GroupKind::CyclicPermutation => "cyclic permutation group".to_string(),
        GroupKind::Explicit => format!("group on {} generators", c.group.generators.len()),
    };
    let smash = match c.smash.kind {
        SmashKindSpec::Group => "group",
        SmashKindSpec::Dual => "dual",
    };
    format!("{ring} over {field}, {group}, {smash} smash")
}

fn pertinency_body(out: &mut String, p: &PertinencyReport) {
    let rows: Vec<Vec<String>> = (0..p.hilbert_quotient.len())
        .map(|d| vec![d.to_string(), p.dims_b[d].to_string(), p.dims_i[d].to_string(), p.hilbert_quotient[d].to_string()])
        .collect();
    out.push_str(&table(&["degree", "dim_B", "dim_I", "h"], &rows));
    writeln!(out, "classification: {}", classification_line(&p.classification)).unwrap();
    match &p.gkdim_quotient {
        Some(m) => writeln!(out, "GKdim(B/I): {m}").unwrap(),
        None => writeln!(out, "GKdim(B/I): unknown").unwrap(),
    }
    match &p.pertinency {
        Pertinency::Exact { value } => writeln!(out, "pertinency: {value} (exact)").unwrap(),
        Pertinency::Estimate { value, provenance } => writeln!(out, "pertinency: {value} (estimate: {provenance})").unwrap(),
        Pertinency::Unknown { reason } => writeln!(out, "pertinency: unknown ({reason})").unwrap(),
    }
    writeln!(out, "computed over {} by {}, degrees 0..={}", p.field, p.method, p.degree_reached).unwrap();
    if !p.certificate_primes.is_empty() {
        writeln!(out, "certificate primes: {:?}", p.certificate_primes).unwrap();
    }
    for a in &p.annotations {
        writeln!(out, "known bound: {a}").unwrap();
    }
}

pub fn to_table(report: &Report) -> String {
    let r = &report.results;
    let mut out = format!("pertinency {}: {}\n", report.version, describe(report));
    section(&mut out, "trace", &r.trace, |out, t| {
        let rows: Vec<Vec<String>> = t.elements.iter().map(|e| vec![e.element.clone(), e.trace.clone()]).collect();
        out.push_str(&table(&["element", "Tr(g,t)"], &rows));
    });
    section(&mut out, "hdet", &r.hdet, |out, h| {
        let rows: Vec<Vec<String>> = h.elements.iter().map(|e| vec![e.element.clone(), e.value.clone()]).collect();
        out.push_str(&table(&["element", "hdet"], &rows));
        writeln!(out, "trivial: {}", h.trivial).unwrap();
    });
    section(&mut out, "reflection", &r.reflection, |out, x| {
        let rows: Vec<Vec<String>> =
            x.elements.iter().zip(&x.numbers).map(|(e, n)| vec![e.clone(), n.to_string()]).collect();
        out.push_str(&table(&["element", "r(g)"], &rows));
        match x.group {
            Some(v) => writeln!(out, "r(R,G) = {v}").unwrap(),
            None => writeln!(out, "r(R,G) undefined for the trivial group").unwrap(),
        }
        writeln!(out, "quasi-reflections: {:?}, quasi-bireflections: {:?}", x.quasi_reflections, x.quasi_bireflections)
            .unwrap();
        if let Some(ok) = x.odd_cycle_check {
            writeln!(out, "odd cycle check: {}", if ok { "pass" } else { "FAIL" }).unwrap();
        }
    });
    section(&mut out, "molien", &r.molien, |out, m| {
        let rows: Vec<Vec<String>> = m
            .coefficients
            .iter()
            .enumerate()
            .map(|(d, c)| {
                let direct = m.invariant_dims.get(d).map_or(String::new(), usize::to_string);
                let corner = m.corner_dims.as_ref().and_then(|c| c.get(d)).map_or(String::new(), usize::to_string);
                vec![d.to_string(), c.clone(), direct, corner]
            })
            .collect();
        out.push_str(&table(&["degree", "molien", "direct", "corner"], &rows));
        writeln!(out, "consistent through degree {}: {}", m.checked_through, m.consistent).unwrap();
    });
    section(&mut out, "pertinency", &r.pertinency, pertinency_body);
    section(&mut out, "membership", &r.membership, |out, m| {
        let rows: Vec<Vec<String>> = m
            .checks
            .iter()
            .map(|c| {
                let expected = c.expected.map_or("-".to_string(), |e| e.to_string());
                vec![c.element.clone(), c.in_ideal.to_string(), expected]
            })
            .collect();
        out.push_str(&table(&["element", "in I", "expected"], &rows));
        writeln!(out, "passed: {}", m.passed).unwrap();
    });
    section(&mut out, "verify_lemma53", &r.verify_lemma53, |out, l| {
        let fmt = |v: &Option<Vec<bool>>| v.as_ref().map_or("not applicable".to_string(), |v| format!("{v:?}"));
        writeln!(out, "anticommutators: {}", l.suite.anticommutators).unwrap();
        writeln!(out, "(y_s y_(s-1))^n # 1 in I: {}", fmt(&l.suite.pair_powers)).unwrap();
        writeln!(out, "y_s^(2(d+1)) # 1 in I: {}", fmt(&l.suite.square_powers)).unwrap();
        writeln!(out, "passed: {}", l.passed).unwrap();
    });
    if !report.timings_ms.is_empty() {
        writeln!(out, "\ntimings (ms): {:?}", report.timings_ms).unwrap();
    }
    out
}
