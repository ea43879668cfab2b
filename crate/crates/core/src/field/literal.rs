//! `GF(p)`, `GF(q; modulus)` and element literals such as `3+2t`.

use super::{is_prime, FieldError, FieldSpec};
use crate::text::{ParseError, ParseErrorKind};

fn strip_ws(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

/// Parses a polynomial in `t` with integer coefficients into coefficients, low to high.
/// Columns in errors are 1-based positions in `s`.
pub(crate) fn parse_t_poly(s: &str) -> Result<Vec<i64>, ParseError> {
    let b = s.as_bytes();
    let mut i = 0usize;
    let mut out: Vec<i64> = Vec::new();
    if b.is_empty() {
        return Err(ParseError::expected(1, 1, "polynomial in t"));
    }
    let mut first = true;
    while i < b.len() {
        let mut sign = 1i64;
        if b[i] == b'+' || b[i] == b'-' {
            if b[i] == b'-' {
                sign = -1;
            }
            i += 1;
        } else if !first {
            return Err(ParseError::expected(1, i + 1, "`+` or `-`"));
        }
        first = false;
        let start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        let coeff = if i > start {
            s[start..i]
                .parse::<i64>()
                .map_err(|_| ParseError::expected(1, start + 1, "integer coefficient"))?
        } else {
            1
        };
        let mut exp = 0usize;
        let had_coeff = i > start;
        if i < b.len() && b[i] == b'*' {
            if !had_coeff {
                return Err(ParseError::expected(1, i + 1, "coefficient before `*`"));
            }
            i += 1;
            if i >= b.len() || b[i] != b't' {
                return Err(ParseError::expected(1, i + 1, "`t`"));
            }
        }
        if i < b.len() && b[i] == b't' {
            i += 1;
            exp = 1;
            if i < b.len() && b[i] == b'^' {
                i += 1;
                let es = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                exp = s[es..i]
                    .parse()
                    .map_err(|_| ParseError::expected(1, es + 1, "exponent"))?;
            }
        } else if !had_coeff {
            return Err(ParseError::expected(1, i + 1, "coefficient or `t`"));
        }
        if exp >= out.len() {
            out.resize(exp + 1, 0);
        }
        out[exp] += sign * coeff;
    }
    Ok(out)
}

fn field_err(column: usize, e: FieldError) -> ParseError {
    ParseError {
        line: 1,
        column,
        kind: ParseErrorKind::Field(e),
    }
}

/// Parses `GF(p)`, `GF(q)` for a shipped preset, or `GF(q; modulus)` where `q`
/// may be written as `p^n`. Whitespace is ignored.
pub fn parse_field(text: &str) -> Result<FieldSpec, ParseError> {
    let s = strip_ws(text);
    let inner = s
        .strip_prefix("GF(")
        .ok_or_else(|| ParseError::expected(1, 1, "`GF(`"))?;
    let inner = inner
        .strip_suffix(')')
        .ok_or_else(|| ParseError::expected(1, s.len() + 1, "`)`"))?;
    let (order_part, modulus_part) = match inner.split_once(';') {
        Some((a, m)) => (a, Some(m)),
        None => (inner, None),
    };
    let col = 4;
    let (p, n) = match order_part.split_once('^') {
        Some((p, n)) => {
            let p: u64 = p
                .parse()
                .map_err(|_| ParseError::expected(1, col, "field order"))?;
            let n: u32 = n.parse().map_err(|_| {
                ParseError::expected(1, col + order_part.find('^').unwrap() + 1, "exponent")
            })?;
            if !is_prime(p) {
                return Err(field_err(col, FieldError::NonPrimeCharacteristic(p)));
            }
            (p, n)
        }
        None => {
            let q: u64 = order_part
                .parse()
                .map_err(|_| ParseError::expected(1, col, "field order"))?;
            match prime_power(q) {
                Some(pn) => pn,
                None => return Err(field_err(col, FieldError::NonPrimeCharacteristic(q))),
            }
        }
    };
    match modulus_part {
        None if n == 1 => FieldSpec::prime(p).map_err(|e| field_err(col, e)),
        None => FieldSpec::preset(p.pow(n)).ok_or_else(|| {
            ParseError::expected(
                1,
                col + order_part.len(),
                "`; <modulus>` for a non-prime order",
            )
        }),
        Some(m) => {
            let mcol = col + order_part.len() + 1;
            let coeffs = parse_t_poly(m).map_err(|e| e.at(1, mcol))?;
            if coeffs.len() != n as usize + 1 {
                return Err(ParseError::invalid(
                    1,
                    mcol,
                    format!(
                        "modulus degree {} does not match order exponent {n}",
                        coeffs.len() - 1
                    ),
                ));
            }
            let reduced: Vec<u64> = coeffs
                .iter()
                .map(|&c| c.rem_euclid(p as i64) as u64)
                .collect();
            FieldSpec::new(p, &reduced).map_err(|e| field_err(mcol, e))
        }
    }
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut n = 0u32;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        n += 1;
    }
    (r == 1).then_some((p, n))
}

/// Parses an element literal (polynomial in `t`) of `field`, reducing
/// coefficients mod `p` and powers of `t` by the modulus.
pub fn parse_element(field: &FieldSpec, text: &str) -> Result<super::FieldElement, ParseError> {
    let s = strip_ws(text);
    let coeffs = parse_t_poly(&s)?;
    if field.degree() == 1 && coeffs.len() > 1 && coeffs[1..].iter().any(|&c| c != 0) {
        return Err(ParseError::invalid(
            1,
            1,
            "`t` is not defined in a prime field",
        ));
    }
    Ok(field.from_coeffs(&coeffs))
}
