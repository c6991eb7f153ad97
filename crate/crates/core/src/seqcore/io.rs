//! Line-oriented text formats.
//!
//! Sequence file:
//!
//! ```text
//! interval 0 1
//! 0 1
//! 1 1/2
//! 2 1/6
//! ```
//!
//! Moment files use the same `<n> <value>` rows without the header. Blank
//! lines and lines starting with `#` are ignored. Indices must run
//! `0, 1, 2, ...` with no gaps or repeats.

use super::{Interval, MomentVector, PrimitiveSeq};
use crate::error::{Error, Result};
use crate::exactmath::{parse_rational, Rational};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_rows<'a>(lines: impl Iterator<Item = (usize, &'a str)>) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    for (lineno, line) in lines {
        let mut parts = line.split_whitespace();
        let (Some(idx), Some(val), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse(format!("line {lineno}: expected `<n> <value>`")));
        };
        let n: usize = idx
            .parse()
            .map_err(|_| Error::Parse(format!("line {lineno}: bad index `{idx}`")))?;
        if n < out.len() {
            return Err(Error::Parse(format!("line {lineno}: duplicate index {n}")));
        }
        if n > out.len() {
            return Err(Error::Parse(format!(
                "line {lineno}: index {n} skips index {}",
                out.len()
            )));
        }
        let v = parse_rational(val)
            .map_err(|e| Error::Parse(format!("line {lineno}: {e}")))?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::Parse("no terms".into()));
    }
    Ok(out)
}

/// Parses a sequence file without admissibility validation, so diagnostics
/// can run on arbitrary input.
pub fn parse_sequence_file(text: &str) -> Result<PrimitiveSeq> {
    let mut lines = content_lines(text);
    let Some((lineno, header)) = lines.next() else {
        return Err(Error::Parse("empty sequence file".into()));
    };
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 || parts[0] != "interval" {
        return Err(Error::Parse(format!(
            "line {lineno}: expected `interval <a> <b>`"
        )));
    }
    let a = parse_rational(parts[1])?;
    let b = parse_rational(parts[2])?;
    let interval = Interval::new(a, b).map_err(|e| Error::Parse(format!("line {lineno}: {e}")))?;
    PrimitiveSeq::from_raw(interval, parse_rows(lines)?)
}

pub fn format_sequence_file(ps: &PrimitiveSeq) -> String {
    let mut out = format!("interval {} {}\n", ps.interval().a(), ps.interval().b());
    for (n, e) in ps.eps().iter().enumerate() {
        out.push_str(&format!("{n} {e}\n"));
    }
    out
}

pub fn parse_moment_file(text: &str, b: Rational) -> Result<MomentVector> {
    MomentVector::new(b, parse_rows(content_lines(text))?)
}

pub fn format_moment_file(mv: &MomentVector) -> String {
    mv.moments
        .iter()
        .enumerate()
        .map(|(n, v)| format!("{n} {v}\n"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};

    #[test]
    fn parse_and_format() {
        let text = "interval 0 1\n0 1\n1 1/2\n2 1/6\n";
        let ps = parse_sequence_file(text).unwrap();
        assert_eq!(ps.eps(), &[int(1), rat(1, 2), rat(1, 6)]);
        assert_eq!(format_sequence_file(&ps), text);
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(parse_sequence_file("interval 0 1\n0 1\n2 1/2\n").is_err());
        assert!(parse_sequence_file("interval 0 1\n0 1\n1 1/2\n1 1/3\n").is_err());
        assert!(parse_sequence_file("interval 0 1\n1 1/2\n").is_err());
        assert!(parse_sequence_file("0 1\n").is_err());
        assert!(parse_sequence_file("interval 1 0\n0 1\n").is_err());
        assert!(parse_sequence_file("interval 0 1\n0 1 2\n").is_err());
    }

    #[test]
    fn comments_and_moments() {
        let mv = parse_moment_file("# uniform\n0 1\n\n1 1/2\n", int(1)).unwrap();
        assert_eq!(mv.moments, vec![int(1), rat(1, 2)]);
        assert_eq!(format_moment_file(&mv), "0 1\n1 1/2\n");
    }
}
