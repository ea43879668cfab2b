//! Shared pieces of the line-oriented text formats.

use std::fmt;

use thiserror::Error;

use crate::field::FieldError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Syntax error: what was expected at the position.
    Expected(String),
    /// The text was well formed but named an invalid field.
    Field(FieldError),
    /// Structurally valid text with inconsistent content.
    Invalid(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Expected(s) => write!(f, "expected {s}"),
            ParseErrorKind::Field(e) => write!(f, "{e}"),
            ParseErrorKind::Invalid(s) => f.write_str(s),
        }
    }
}

/// A positioned parse diagnostic. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn expected(line: usize, column: usize, what: impl Into<String>) -> Self {
        Self {
            line,
            column,
            kind: ParseErrorKind::Expected(what.into()),
        }
    }

    pub fn invalid(line: usize, column: usize, what: impl Into<String>) -> Self {
        Self {
            line,
            column,
            kind: ParseErrorKind::Invalid(what.into()),
        }
    }

    /// Shifts a diagnostic produced on a fragment to its place in a file.
    pub(crate) fn at(mut self, line: usize, column_offset: usize) -> Self {
        self.line = line;
        self.column += column_offset;
        self
    }
}

/// Iterator over `(1-based line number, line)` that skips blank lines.
pub(crate) struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    last: usize,
}

impl<'a> Lines<'a> {
    pub fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate().peekable(),
            last: 0,
        }
    }

    pub fn next_line(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        for (i, l) in self.inner.by_ref() {
            self.last = i + 1;
            if !l.trim().is_empty() {
                return Ok((i + 1, l));
            }
        }
        Err(ParseError::expected(self.last + 1, 1, what))
    }

    pub fn peek_line(&mut self) -> Option<(usize, &'a str)> {
        while let Some(&(i, l)) = self.inner.peek() {
            if l.trim().is_empty() {
                self.inner.next();
                self.last = i + 1;
                continue;
            }
            return Some((i + 1, l));
        }
        None
    }

    pub fn finish(mut self) -> Result<(), ParseError> {
        match self.peek_line() {
            None => Ok(()),
            Some((n, _)) => Err(ParseError::expected(n, 1, "end of input")),
        }
    }
}

/// Splits `key=value`, reporting the column of the token.
pub(crate) fn key_value<'a>(
    token: &'a str,
    key: &str,
    line: usize,
    column: usize,
) -> Result<&'a str, ParseError> {
    token
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| ParseError::expected(line, column, format!("`{key}=...`")))
}

/// Column (1-based) of `sub` inside `line`, when `sub` is a subslice of it.
pub(crate) fn column_of(line: &str, sub: &str) -> usize {
    let start = line.as_ptr() as usize;
    let s = sub.as_ptr() as usize;
    if s >= start && s <= start + line.len() {
        s - start + 1
    } else {
        1
    }
}

/// Comma-separated label list; empty string is the empty list.
pub(crate) fn split_list(s: &str) -> Vec<String> {
    if s.is_empty() {
        Vec::new()
    } else {
        s.split(',').map(str::to_string).collect()
    }
}
