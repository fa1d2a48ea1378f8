//! Curve and pair files.
//!
//! One record per line, `<label> : <a1> <a2> <a3> <a4> <a6>`, coefficients
//! as integers or `p/q`. Blank lines and text after `#` are ignored.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use iwasawa_core::curve::{named_curve, CurveModel};
use iwasawa_core::ring::Rational;
use iwasawa_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: curve {label} is singular")]
    SingularCurve { line: usize, label: String },
    #[error("line {line}: duplicate label {label}")]
    Duplicate { line: usize, label: String },
    #[error("line {line}: {label}: {source}")]
    Curve { line: usize, label: String, source: CoreError },
    #[error("unknown curve label {0}")]
    UnknownLabel(String),
}

fn read(path: &Path) -> Result<String, FileError> {
    fs::read_to_string(path).map_err(|source| FileError::Io { path: path.display().to_string(), source })
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.parse::<i128>().ok()?, d.parse::<i128>().ok()?),
        None => (s.parse::<i128>().ok()?, 1),
    };
    if d == 0 {
        return None;
    }
    Some(Rational::new(n, d))
}

pub fn parse_curve_text(text: &str) -> Result<Vec<CurveModel>, FileError> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw);
        if body.is_empty() {
            continue;
        }
        let (label, rest) = body.split_once(':').ok_or(FileError::Parse { line, msg: "expected `label : a1 a2 a3 a4 a6`".into() })?;
        let label = label.trim();
        if label.is_empty() || label.contains(char::is_whitespace) {
            return Err(FileError::Parse { line, msg: format!("bad label `{label}`") });
        }
        let fields: Vec<&str> = rest.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(FileError::Parse { line, msg: format!("expected 5 coefficients, found {}", fields.len()) });
        }
        let mut a = [Rational::from_integer(0); 5];
        for (slot, f) in a.iter_mut().zip(&fields) {
            *slot = parse_rational(f).ok_or(FileError::Parse { line, msg: format!("bad coefficient `{f}`") })?;
        }
        if !seen.insert(label.to_string()) {
            return Err(FileError::Duplicate { line, label: label.into() });
        }
        let curve = CurveModel::new(label, a).map_err(|e| match e {
            CoreError::SingularCurve => FileError::SingularCurve { line, label: label.into() },
            source => FileError::Curve { line, label: label.into(), source },
        })?;
        out.push(curve);
    }
    Ok(out)
}

pub fn parse_curve_file(path: &Path) -> Result<Vec<CurveModel>, FileError> {
    parse_curve_text(&read(path)?)
}

/// The record line for a curve, parseable by [`parse_curve_text`].
pub fn format_record(e: &CurveModel) -> String {
    let coeffs: Vec<String> = e.coeffs().iter().map(|c| if c.is_integer() { c.numer().to_string() } else { format!("{}/{}", c.numer(), c.denom()) }).collect();
    format!("{} : {}", e.label(), coeffs.join(" "))
}

/// Pairs of labels, two per line.
pub fn parse_pair_text(text: &str) -> Result<Vec<(String, String)>, FileError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = strip_comment(raw);
        if body.is_empty() {
            continue;
        }
        let f: Vec<&str> = body.split_whitespace().collect();
        if f.len() != 2 {
            return Err(FileError::Parse { line: i + 1, msg: "expected two labels".into() });
        }
        out.push((f[0].to_string(), f[1].to_string()));
    }
    Ok(out)
}

pub fn parse_pair_file(path: &Path) -> Result<Vec<(String, String)>, FileError> {
    parse_pair_text(&read(path)?)
}

/// Looks a label up among loaded curves, then among the built-in ones.
pub fn resolve(label: &str, loaded: &[CurveModel]) -> Result<CurveModel, FileError> {
    loaded
        .iter()
        .find(|c| c.label() == label)
        .cloned()
        .or_else(|| named_curve(label))
        .ok_or_else(|| FileError::UnknownLabel(label.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_records_and_comments() {
        let text = "# header\n11a1 : 0 -1 1 -10 -20\n\n37a1 : 0 0 1 -1 0  # rank one\n";
        let cs = parse_curve_text(text).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[0].conductor(), 11);
        assert_eq!(cs[1].label(), "37a1");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_curve_text("x : 0 0 0 0 0"), Err(FileError::SingularCurve { line: 1, .. })));
        assert!(matches!(parse_curve_text("a : 0 0 1 -1 0\na : 0 0 1 -1 0"), Err(FileError::Duplicate { line: 2, .. })));
        assert!(matches!(parse_curve_text("a : 0 0 1 -1"), Err(FileError::Parse { line: 1, .. })));
        assert!(matches!(parse_curve_text("a 0 0 1 -1 0"), Err(FileError::Parse { line: 1, .. })));
        assert!(matches!(parse_curve_text("a : 0 0 1/0 -1 0"), Err(FileError::Parse { line: 1, .. })));
    }

    #[test]
    fn rational_coefficients_round_trip() {
        let cs = parse_curve_text("r : 0 0 0 -1/4 1/8").unwrap();
        let again = parse_curve_text(&format_record(&cs[0])).unwrap();
        assert_eq!(again[0].coeffs(), cs[0].coeffs());
        assert_eq!(again[0].conductor(), cs[0].conductor());
    }
}
