//! Candidate list files: `disc,a,b,c,d,e,g,source[,extra...]`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use ternary_core::TernaryForm;

pub const TABLE1_CSV: &str = include_str!("../../../data/table1.csv");
pub const REGULAR_CSV: &str = include_str!("../../../data/jks_regular.csv");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Source {
    Jks,
    Table1,
    SelfComputed,
}

impl FromStr for Source {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "JKS" => Ok(Source::Jks),
            "TABLE1" => Ok(Source::Table1),
            "SELF" => Ok(Source::SelfComputed),
            _ => Err(()),
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Jks => "JKS",
            Source::Table1 => "TABLE1",
            Source::SelfComputed => "SELF",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateRow {
    pub line: usize,
    pub disc: i64,
    pub form: TernaryForm,
    pub source: Source,
    /// Columns after `source`, kept verbatim.
    pub extra: Vec<String>,
}

#[derive(Debug)]
pub struct DataError {
    pub origin: String,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for DataError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.origin, self.line, self.message)
    }
}

/// Parses a candidate list; with `check_disc` a row whose form has another
/// discriminant is a data error.
pub fn parse_candidates(
    text: &str,
    origin: &str,
    check_disc: bool,
) -> Result<Vec<CandidateRow>, DataError> {
    let err = |line, message: String| DataError {
        origin: origin.to_string(),
        line,
        message,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.starts_with('#'));
    match lines.next() {
        Some((_, h)) if h.trim().starts_with("disc,a,b,c,d,e,g,source") => {}
        _ => return Err(err(1, "expected header disc,a,b,c,d,e,g,source".into())),
    }
    let mut out = Vec::new();
    for (i, raw) in lines {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = raw.trim().split(',').map(str::trim).collect();
        if cols.len() < 8 {
            return Err(err(
                line,
                format!("expected at least 8 columns, found {}", cols.len()),
            ));
        }
        let disc: i64 = cols[0]
            .parse()
            .map_err(|_| err(line, format!("bad discriminant {:?}", cols[0])))?;
        let form: TernaryForm = cols[1..7]
            .join(",")
            .parse()
            .map_err(|e| err(line, format!("{e}")))?;
        if check_disc && form.discriminant() != disc {
            return Err(err(
                line,
                format!(
                    "form {form} has discriminant {}, not {disc}",
                    form.discriminant()
                ),
            ));
        }
        let source = cols[7]
            .parse()
            .map_err(|_| err(line, format!("unknown source {:?}", cols[7])))?;
        out.push(CandidateRow {
            line,
            disc,
            form,
            source,
            extra: cols[8..].iter().map(|s| s.to_string()).collect(),
        });
    }
    Ok(out)
}

pub fn disc_set(rows: &[CandidateRow]) -> BTreeSet<i64> {
    rows.iter().map(|r| r.disc).collect()
}

pub fn render_candidates(rows: &[(i64, TernaryForm, Source)]) -> String {
    let mut out = String::from("disc,a,b,c,d,e,g,source\n");
    for (d, f, s) in rows {
        out += &format!("{d},{f},{s}\n");
    }
    out
}
