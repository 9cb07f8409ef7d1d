use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::triangular::{Matrix, UpperTriangular};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Formats one entry as `(re,im)`. The shortest round-trip representation
/// is used, so parsing it back gives the same bits.
pub fn format_entry(z: Complex64) -> String {
    format!("({:e},{:e})", z.re, z.im)
}

/// Parses `(re,im)`; a bare real number is also accepted.
pub fn parse_entry(token: &str) -> Option<Complex64> {
    let token = token.trim();
    if let Some(inner) = token.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        let (re, im) = inner.split_once(',')?;
        let re = re.trim().parse::<f64>().ok()?;
        let im = im.trim().parse::<f64>().ok()?;
        return Some(Complex64::new(re, im));
    }
    token.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0))
}

/// Text form: the order on the first line, then one row per line.
pub fn format_matrix(t: &UpperTriangular) -> String {
    let n = t.order();
    let mut out = String::new();
    let _ = writeln!(out, "{n}");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format_entry(t.get(i, j))).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

/// Parses the text form. Blank lines and lines starting with `#` are
/// skipped. Every error carries the 1-based line number it refers to.
pub fn parse_matrix(text: &str) -> Result<UpperTriangular> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing order header"))?;
    let n: usize = header
        .parse()
        .map_err(|_| parse_err(header_line, format!("bad order `{header}`")))?;
    if n == 0 {
        return Err(parse_err(header_line, "order must be positive"));
    }

    let mut row_lines = Vec::with_capacity(n);
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        let (line, text) = lines
            .next()
            .ok_or_else(|| parse_err(header_line, format!("expected {n} rows, found {i}")))?;
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != n {
            return Err(parse_err(
                line,
                format!("expected {n} entries, found {}", tokens.len()),
            ));
        }
        for (j, tok) in tokens.iter().enumerate() {
            let z =
                parse_entry(tok).ok_or_else(|| parse_err(line, format!("bad entry `{tok}`")))?;
            m[(i, j)] = z;
        }
        row_lines.push(line);
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, format!("extra content after {n} rows")));
    }

    UpperTriangular::new(m).map_err(|e| match e {
        Error::NotTriangular { row, col } => parse_err(
            row_lines[row],
            format!(
                "entry ({}, {}) below the diagonal is nonzero",
                row + 1,
                col + 1
            ),
        ),
        Error::NonFinite { row, col } => parse_err(
            row_lines[row],
            format!("entry ({}, {}) is not finite", row + 1, col + 1),
        ),
        other => other,
    })
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<UpperTriangular> {
    let text = fs::read_to_string(path)?;
    parse_matrix(&text)
}

pub fn write_matrix(t: &UpperTriangular, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_matrix(t))?;
    Ok(())
}
