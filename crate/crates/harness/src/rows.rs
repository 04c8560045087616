//! Experiment rows and their CSV / JSON encodings.

use std::io::Write;

use hypenergy_core::BoundReport;
use num_traits::ToPrimitive;
use serde::Serialize;

/// One evaluated instance.
///
/// `lhs` keeps the exact integer when one is known. `millis` is 0 unless
/// timings were requested, so that output is byte-reproducible by default.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub suite: String,
    pub p: u64,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "C")]
    pub c: String,
    #[serde(rename = "D")]
    pub d: String,
    pub lambda: i64,
    pub lhs: String,
    pub main_term: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub exponent: Option<f64>,
    pub pass: bool,
    pub millis: u64,
    #[serde(skip)]
    pub asserted: bool,
    #[serde(skip)]
    pub notes: Vec<String>,
}

/// Set labels for the four columns; unused ones stay empty.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Labels {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
}

impl Labels {
    pub fn new(a: impl ToString, b: impl ToString, c: impl ToString, d: impl ToString) -> Self {
        Labels {
            a: a.to_string(),
            b: b.to_string(),
            c: c.to_string(),
            d: d.to_string(),
        }
    }

    pub fn one(a: impl ToString) -> Self {
        Labels {
            a: a.to_string(),
            ..Default::default()
        }
    }

    pub fn two(a: impl ToString, b: impl ToString) -> Self {
        Labels {
            a: a.to_string(),
            b: b.to_string(),
            ..Default::default()
        }
    }
}

impl ExperimentRow {
    pub fn from_report(suite: &str, p: u64, labels: Labels, lambda: i64, r: &BoundReport) -> Self {
        let lhs = match &r.lhs_exact {
            Some(x) => x.to_string(),
            None => r.lhs.to_string(),
        };
        let main_term = match &r.main_term_exact {
            Some(m) => m.to_f64().unwrap_or(r.main_term),
            None => r.main_term,
        };
        ExperimentRow {
            suite: suite.to_string(),
            p,
            a: labels.a,
            b: labels.b,
            c: labels.c,
            d: labels.d,
            lambda,
            lhs,
            main_term,
            rhs: r.rhs,
            ratio: r.ratio(),
            exponent: r.exponent,
            pass: r.passed,
            millis: 0,
            asserted: r.asserted,
            notes: r.notes.clone(),
        }
    }

    /// An asserted row that failed.
    pub fn is_failure(&self) -> bool {
        self.asserted && !self.pass
    }
}

pub fn write_csv<W: Write>(rows: &[ExperimentRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record([
            "suite",
            "p",
            "A",
            "B",
            "C",
            "D",
            "lambda",
            "lhs",
            "main_term",
            "rhs",
            "ratio",
            "exponent",
            "pass",
            "millis",
        ])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(rows: &[ExperimentRow], mut out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    writeln!(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn csv_header_and_values() {
        let r = BoundReport::exact("x", BigInt::from(12), BigInt::from(20), vec![]);
        let row = ExperimentRow::from_report("thm1", 11, Labels::one("interval:1..3"), 1, &r);
        let mut buf = Vec::new();
        write_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "suite,p,A,B,C,D,lambda,lhs,main_term,rhs,ratio,exponent,pass,millis"
        );
        assert_eq!(
            lines.next().unwrap(),
            "thm1,11,interval:1..3,,,,1,12,0.0,20.0,0.6,,true,0"
        );
    }

    #[test]
    fn empty_csv_has_header() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("suite,p,A"));
    }
}
