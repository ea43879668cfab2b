//! Sparse multivariate polynomials over a prime field `F_p`.

use std::collections::BTreeMap;
use std::fmt;

use super::DerivationError;
use crate::field::is_prime;
use crate::text::ParseError;

/// A polynomial in `x1..xn` with coefficients in `[0, p)`. Zero coefficients
/// are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    p: u32,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, u32>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.p)
    }
}

fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    (a as u64 * b as u64 % p as u64) as u32
}

/// Graded lexicographic order: total degree first, then `x1 > x2 > ...`.
fn grlex(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl Polynomial {
    pub fn zero(p: u32, nvars: usize) -> Self {
        assert!(is_prime(p as u64), "characteristic {p} is not prime");
        Self {
            p,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(p: u32, nvars: usize, c: i64) -> Self {
        let mut z = Self::zero(p, nvars);
        z.add_term(vec![0; nvars], c.rem_euclid(p as i64) as u32);
        z
    }

    /// The variable `x_{i+1}` (0-based index `i`).
    pub fn var(p: u32, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut z = Self::zero(p, nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        z.terms.insert(e, 1);
        z
    }

    /// Builds from `(exponents, coefficient)` pairs, reducing coefficients mod `p`.
    pub fn from_terms(
        p: u32,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, i64)>,
    ) -> Self {
        let mut z = Self::zero(p, nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            z.add_term(e, c.rem_euclid(p as i64) as u32);
        }
        z
    }

    fn add_term(&mut self, e: Vec<u32>, c: u32) {
        if c == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = (*o.get() + c) % self.p;
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], u32)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> u32 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Terms in decreasing graded lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(&[u32], u32)> {
        let mut t: Vec<_> = self.terms().collect();
        t.sort_by(|a, b| grlex(b.0, a.0));
        t
    }

    fn check(&self, other: &Self) {
        assert_eq!(
            (self.p, self.nvars),
            (other.p, other.nvars),
            "polynomials over different rings"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let mut r = self.clone();
        for (e, &c) in &other.terms {
            r.add_term(e.clone(), c);
        }
        r
    }

    pub fn neg(&self) -> Self {
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = self.p - *c;
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Self {
        let c = c % self.p;
        let mut r = Self::zero(self.p, self.nvars);
        if c != 0 {
            r.terms = self
                .terms
                .iter()
                .map(|(e, &v)| (e.clone(), mul_mod(v, c, self.p)))
                .collect();
        }
        r
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let mut r = Self::zero(self.p, self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                r.add_term(e, mul_mod(ca, cb, self.p));
            }
        }
        r
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(self.p, self.nvars, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `f^(p^m)`: exponents are multiplied by `p^m`; coefficients are fixed by Frobenius.
    pub fn frobenius(&self, m: u32) -> Self {
        let factor = self.p.pow(m);
        let mut r = Self::zero(self.p, self.nvars);
        r.terms = self
            .terms
            .iter()
            .map(|(e, &c)| (e.iter().map(|&x| x * factor).collect(), c))
            .collect();
        r
    }

    /// Formal partial derivative with respect to `x_{i+1}`.
    pub fn partial_derivative(&self, i: usize) -> Result<Self, DerivationError> {
        if i >= self.nvars {
            return Err(DerivationError::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let mut r = Self::zero(self.p, self.nvars);
        for (e, &c) in &self.terms {
            let k = e[i] % self.p;
            if k == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            r.add_term(d, mul_mod(c, k, self.p));
        }
        Ok(r)
    }

    /// Evaluates with `point[i]` substituted for `x_{i+1}`, using the given
    /// field operations on codes.
    pub fn eval_with(
        &self,
        point: &[u32],
        add: impl Fn(u32, u32) -> u32,
        mul: impl Fn(u32, u32) -> u32,
        from_int: impl Fn(u32) -> u32,
    ) -> u32 {
        self.terms.iter().fold(0, |acc, (e, &c)| {
            let mut t = from_int(c);
            for (&x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = mul(t, x);
                }
            }
            add(acc, t)
        })
    }

    /// Text with variables named `<var>1, <var>2, ...`.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| {
                        if k == 1 {
                            format!("{var}{}", i + 1)
                        } else {
                            format!("{var}{}^{k}", i + 1)
                        }
                    })
                    .collect();
                match (c, mono.is_empty()) {
                    (_, true) => c.to_string(),
                    (1, false) => mono.join("*"),
                    _ => format!("{c}*{}", mono.join("*")),
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// Parses `+ - * ^ ( )`, non-negative integer literals and variables
    /// `<var>1 .. <var>n`. Columns in errors are 1-based within `text`.
    pub fn parse_with(text: &str, p: u32, nvars: usize, var: char) -> Result<Self, ParseError> {
        if !is_prime(p as u64) {
            return Err(ParseError::invalid(
                1,
                1,
                format!("characteristic {p} is not prime"),
            ));
        }
        let mut parser = Parser {
            src: text.as_bytes(),
            pos: 0,
            p,
            nvars,
            var: var as u8,
        };
        let r = parser.expr()?;
        parser.skip_ws();
        if parser.pos < parser.src.len() {
            return Err(parser.err("operator or end of polynomial"));
        }
        Ok(r)
    }

    pub fn parse(text: &str, p: u32, nvars: usize) -> Result<Self, ParseError> {
        Self::parse_with(text, p, nvars, 'x')
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    p: u32,
    nvars: usize,
    var: u8,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> ParseError {
        ParseError::expected(1, self.pos + 1, what)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| ParseError::expected(1, start + 1, "integer that fits in 64 bits"))
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = Polynomial::zero(self.p, self.nvars);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            acc = if sign { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(b'+') => sign = false,
                Some(b'-') => sign = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.number()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("`)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                Ok(Polynomial::constant(
                    self.p,
                    self.nvars,
                    (n % self.p as u64) as i64,
                ))
            }
            Some(c) if c == self.var => {
                let at = self.pos;
                self.pos += 1;
                let i = self.number()? as usize;
                if i == 0 || i > self.nvars {
                    return Err(ParseError::invalid(
                        1,
                        at + 1,
                        format!("variable index {i} outside 1..={}", self.nvars),
                    ));
                }
                Ok(Polynomial::var(self.p, self.nvars, i - 1))
            }
            _ => Err(self.err("number, variable or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3(s: &str, n: usize) -> Polynomial {
        Polynomial::parse(s, 3, n).unwrap()
    }

    #[test]
    fn derivative_examples() {
        assert!(p3("x2^3", 3).partial_derivative(1).unwrap().is_zero());
        assert_eq!(p3("x1+x3", 3).partial_derivative(0).unwrap(), p3("1", 3));
        assert_eq!(p3("x1*x2", 3).partial_derivative(0).unwrap(), p3("x2", 3));
        assert!(matches!(
            p3("x1", 3).partial_derivative(3),
            Err(DerivationError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn arithmetic_mod_p() {
        assert_eq!(p3("(x1+x2)^3", 2), p3("x1^3 + x2^3", 2));
        assert_eq!(p3("x1 - x1", 1), Polynomial::zero(3, 1));
        assert_eq!(p3("-x1", 1), p3("2*x1", 1));
        assert_eq!(p3("x1+x2", 2).frobenius(1), p3("(x1+x2)^3", 2));
    }

    #[test]
    fn display_round_trip() {
        let f = p3("x1 + x2^3 + 2*x3 + 1", 3);
        assert_eq!(f.to_string(), "x2^3 + x1 + 2*x3 + 1");
        assert_eq!(p3(&f.to_string(), 3), f);
        assert_eq!(Polynomial::zero(3, 2).to_string(), "0");
    }

    #[test]
    fn parse_errors_are_positioned() {
        let e = Polynomial::parse("x1 + x4", 3, 3).unwrap_err();
        assert_eq!(e.column, 6);
        let e = Polynomial::parse("(x1+x2)^(1/3)", 3, 2).unwrap_err();
        assert_eq!(e.column, 9);
        assert!(Polynomial::parse("x1 x2", 3, 2).is_err());
    }
}
