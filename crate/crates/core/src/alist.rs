//! Reader and writer for the alist sparse-matrix format.
//!
//! Layout (all indices 1-based, `0` entries are padding and ignored):
//!
//! ```text
//! n m
//! max_col_degree max_row_degree
//! <n column degrees>
//! <m row degrees>
//! <n lines: check indices of each column>
//! <m lines: variable indices of each row>
//! ```
//!
//! The degree lists may wrap over several lines. Each adjacency list must sit
//! on its own line, padded or not.

use std::fmt::Write as _;

use crate::code::ParityCheckCode;
use crate::error::{AlistError, AlistErrorKind};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate(), last: 0 }
    }

    /// Next non-blank line as (1-based line number, tokens).
    fn next_tokens(&mut self) -> Result<(usize, Vec<usize>), AlistError> {
        for (idx, line) in self.inner.by_ref() {
            let lineno = idx + 1;
            self.last = lineno;
            if line.trim().is_empty() {
                continue;
            }
            let tokens = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| AlistError {
                        line: lineno,
                        kind: AlistErrorKind::NotAnInteger(t.to_string()),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            return Ok((lineno, tokens));
        }
        Err(AlistError { line: self.last + 1, kind: AlistErrorKind::UnexpectedEof })
    }

    fn collect_numbers(&mut self, count: usize) -> Result<(usize, Vec<usize>), AlistError> {
        let mut out = Vec::with_capacity(count);
        let mut first_line = 0;
        while out.len() < count {
            let (line, tokens) = self.next_tokens()?;
            if first_line == 0 {
                first_line = line;
            }
            if out.len() + tokens.len() > count {
                return Err(err(
                    line,
                    AlistErrorKind::Header(format!("expected {count} degree entries")),
                ));
            }
            out.extend(tokens);
        }
        Ok((first_line, out))
    }
}

fn err(line: usize, kind: AlistErrorKind) -> AlistError {
    AlistError { line, kind }
}

fn read_list(
    lines: &mut Lines<'_>,
    degree: usize,
    max_index: usize,
) -> Result<(usize, Vec<usize>), AlistError> {
    let (line, tokens) = lines.next_tokens()?;
    let mut entries = Vec::with_capacity(degree);
    for t in tokens {
        if t == 0 {
            continue;
        }
        if t > max_index {
            return Err(err(line, AlistErrorKind::IndexOutOfRange { index: t, max: max_index }));
        }
        if entries.contains(&(t - 1)) {
            return Err(err(line, AlistErrorKind::DuplicateIndex(t)));
        }
        entries.push(t - 1);
    }
    if entries.len() != degree {
        return Err(err(
            line,
            AlistErrorKind::DegreeMismatch { expected: degree, found: entries.len() },
        ));
    }
    Ok((line, entries))
}

/// Parses alist text into a validated code.
pub fn parse_alist(text: &str) -> Result<ParityCheckCode, AlistError> {
    let mut lines = Lines::new(text);

    let (line, header) = lines.next_tokens()?;
    let [n, m] = header[..] else {
        return Err(err(line, AlistErrorKind::Header("expected \"n m\"".into())));
    };
    if n == 0 || m == 0 {
        return Err(err(line, AlistErrorKind::Header("n and m must be positive".into())));
    }
    let (line, maxes) = lines.next_tokens()?;
    let [max_col, max_row] = maxes[..] else {
        return Err(err(line, AlistErrorKind::Header("expected \"max_col max_row\"".into())));
    };

    let (col_line, col_degrees) = lines.collect_numbers(n)?;
    if col_degrees.iter().any(|&d| d > max_col) {
        return Err(err(col_line, AlistErrorKind::Header("column degree exceeds maximum".into())));
    }
    let (row_line, row_degrees) = lines.collect_numbers(m)?;
    if row_degrees.iter().any(|&d| d > max_row) {
        return Err(err(row_line, AlistErrorKind::Header("row degree exceeds maximum".into())));
    }

    let mut cols = Vec::with_capacity(n);
    for &d in &col_degrees {
        cols.push(read_list(&mut lines, d, m)?);
    }
    let mut rows = Vec::with_capacity(m);
    let mut row_lines = Vec::with_capacity(m);
    for &d in &row_degrees {
        let (line, row) = read_list(&mut lines, d, n)?;
        row_lines.push(line);
        rows.push(row);
    }
    if let Ok((line, _)) = lines.next_tokens() {
        return Err(err(line, AlistErrorKind::TrailingData));
    }

    // column lists must be the exact transpose of the row lists
    let mut transpose = vec![Vec::new(); n];
    for (j, row) in rows.iter().enumerate() {
        for &i in row {
            transpose[i].push(j);
        }
    }
    for ((line, col), t) in cols.iter_mut().zip(&transpose) {
        col.sort_unstable();
        if col != t {
            return Err(err(*line, AlistErrorKind::AdjacencyMismatch));
        }
    }

    ParityCheckCode::from_rows(n, rows).map_err(|e| {
        let line = match &e {
            crate::error::CodeError::EmptyCheck { check }
            | crate::error::CodeError::DegreeOneCheck { check }
            | crate::error::CodeError::DuplicateIndex { check }
            | crate::error::CodeError::IndexOutOfRange { check, .. } => row_lines[*check],
            _ => 1,
        };
        err(line, AlistErrorKind::Code(e))
    })
}

/// Writes a code as alist text, zero-padding every list to the maximum degree.
pub fn emit_alist(code: &ParityCheckCode) -> String {
    let max_col = code.max_variable_degree();
    let max_row = code.max_check_degree();
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", code.n(), code.m());
    let _ = writeln!(out, "{max_col} {max_row}");
    let join = |it: &mut dyn Iterator<Item = usize>| {
        it.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
    };
    let _ = writeln!(out, "{}", join(&mut code.cols().iter().map(Vec::len)));
    let _ = writeln!(out, "{}", join(&mut code.rows().iter().map(Vec::len)));
    for col in code.cols() {
        let mut entries = col.iter().map(|&j| j + 1).chain(std::iter::repeat(0));
        let _ = writeln!(out, "{}", join(&mut entries.by_ref().take(max_col)));
    }
    for row in code.rows() {
        let mut entries = row.iter().map(|&i| i + 1).chain(std::iter::repeat(0));
        let _ = writeln!(out, "{}", join(&mut entries.by_ref().take(max_row)));
    }
    out
}
