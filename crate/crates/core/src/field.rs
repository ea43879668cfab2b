//! Exact arithmetic in `GF(p^n)` for `n <= 4`.
//!
//! A field is fixed by a prime `p` and a monic irreducible modulus over `F_p`.
//! Elements are stored as packed codes `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`
//! where `c_0 + c_1 t + ...` is the residue modulo the modulus. Numeric order
//! of codes is therefore the lexicographic order on `(c_{n-1}, ..., c_0)`.
//!
//! Matrix code works directly on codes through [`FieldSpec`]; [`FieldElement`]
//! is the owning, field-tagged view used at API boundaries.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

mod literal;

pub use literal::{parse_element, parse_field};

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 4;

const ADD_TABLE_LIMIT: u64 = 512;
const LOG_TABLE_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("modulus {modulus} is reducible over F_{p}: {witness}")]
    ReducibleModulus {
        p: u32,
        modulus: String,
        witness: ReducibleWitness,
    },
    #[error("modulus must be monic of degree 1..={MAX_DEGREE}: {0}")]
    BadModulus(String),
    #[error("field order {0} exceeds the supported range")]
    OrderTooLarge(u128),
    #[error("elements belong to different fields")]
    MixedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("no element of multiplicative order {n} in a field of order {order}")]
    NoSuchRoot { n: u64, order: u64 },
}

/// Why a candidate modulus was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReducibleWitness {
    /// `f(root) = 0`.
    Root(u32),
    /// A monic quadratic factor, coefficients low to high.
    Factor(Vec<u32>),
}

impl fmt::Display for ReducibleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReducibleWitness::Root(r) => write!(f, "root {r}"),
            ReducibleWitness::Factor(c) => write!(f, "factor {}", format_poly_desc(c)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

struct Tables {
    /// `exp[i] = g^i` for `i < 2(q-1)`, so products index without a modulo.
    exp: Vec<u32>,
    /// `log[x]` for nonzero `x`; `log[0]` is unused.
    log: Vec<u32>,
}

struct FieldInner {
    p: u32,
    degree: usize,
    /// Monic modulus, low to high, length `degree + 1`.
    modulus: Vec<u32>,
    order: u32,
    /// `p^i` for `i <= degree`.
    pow_p: Vec<u32>,
    add_table: Option<Vec<u32>>,
    tables: Option<Tables>,
}

/// A validated finite field. Cheap to clone.
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldInner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 1 {
            write!(f, "GF({})", self.p())
        } else {
            write!(
                f,
                "GF({}; {})",
                self.order(),
                format_poly_desc(&self.0.modulus)
            )
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Descending-degree rendering with variable `t`, e.g. `t^2+6`.
pub(crate) fn format_poly_desc(coeffs: &[u32]) -> String {
    let mut s = String::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if !s.is_empty() {
            s.push('+');
        }
        s.push_str(&monomial(c, i));
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// Ascending-degree rendering, e.g. `3+2t`.
fn format_poly_asc(coeffs: &[u32]) -> String {
    let mut s = String::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if !s.is_empty() {
            s.push('+');
        }
        s.push_str(&monomial(c, i));
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn monomial(c: u32, i: usize) -> String {
    match (c, i) {
        (c, 0) => c.to_string(),
        (1, 1) => "t".to_string(),
        (c, 1) => format!("{c}t"),
        (1, i) => format!("t^{i}"),
        (c, i) => format!("{c}t^{i}"),
    }
}

fn eval_mod(coeffs: &[u32], x: u64, p: u64) -> u64 {
    coeffs
        .iter()
        .rev()
        .fold(0u64, |acc, &c| (acc * x + c as u64) % p)
}

/// Remainder of `f` modulo a monic `g` over `F_p`, both low to high.
fn poly_rem(f: &[u32], g: &[u32], p: u64) -> Vec<u32> {
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = r.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let shift = r.len() - dg;
        for (j, &gc) in g[..dg].iter().enumerate() {
            r[shift + j] = (r[shift + j] + (p - lead) * gc as u64) % p;
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

fn find_reducible_witness(p: u32, modulus: &[u32]) -> Option<ReducibleWitness> {
    let deg = modulus.len() - 1;
    if deg == 1 {
        return None;
    }
    let pp = p as u64;
    for x in 0..pp {
        if eval_mod(modulus, x, pp) == 0 {
            return Some(ReducibleWitness::Root(x as u32));
        }
    }
    if deg == 4 {
        for c1 in 0..p {
            for c0 in 0..p {
                let q = [c0, c1, 1];
                if poly_rem(modulus, &q, pp).iter().all(|&c| c == 0) {
                    return Some(ReducibleWitness::Factor(q.to_vec()));
                }
            }
        }
    }
    None
}

impl FieldSpec {
    /// Builds and validates `GF(p^n)` with the given monic modulus (low to high).
    ///
    /// A degree-1 modulus yields the prime field regardless of its constant term;
    /// it is normalized to `X`.
    pub fn new(p: u64, modulus: &[u64]) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrimeCharacteristic(p));
        }
        if p > u32::MAX as u64 {
            return Err(FieldError::OrderTooLarge(p as u128));
        }
        let deg = modulus.len().saturating_sub(1);
        let reduced: Vec<u32> = modulus.iter().map(|&c| (c % p) as u32).collect();
        if deg == 0 || deg > MAX_DEGREE || reduced[deg] != 1 {
            return Err(FieldError::BadModulus(format!("{modulus:?}")));
        }
        let order = (p as u128).pow(deg as u32);
        if order > u32::MAX as u128 {
            return Err(FieldError::OrderTooLarge(order));
        }
        let p32 = p as u32;
        let reduced = if deg == 1 { vec![0, 1] } else { reduced };
        if let Some(witness) = find_reducible_witness(p32, &reduced) {
            return Err(FieldError::ReducibleModulus {
                p: p32,
                modulus: format_poly_desc(&reduced),
                witness,
            });
        }
        Ok(Self::build(p32, reduced))
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Self::new(p, &[0, 1])
    }

    /// `GF(49) = F_7[t]/(t^2+1)`.
    pub fn gf49() -> Self {
        Self::new(7, &[1, 0, 1]).expect("t^2+1 is irreducible over F_7")
    }

    /// `GF(9) = F_3[t]/(t^2+1)`.
    pub fn gf9() -> Self {
        Self::new(3, &[1, 0, 1]).expect("t^2+1 is irreducible over F_3")
    }

    /// `GF(25) = F_5[t]/(t^2+2)`.
    pub fn gf25() -> Self {
        Self::new(5, &[2, 0, 1]).expect("t^2+2 is irreducible over F_5")
    }

    /// Named preset for an order, if one is shipped.
    pub fn preset(order: u64) -> Option<Self> {
        match order {
            49 => Some(Self::gf49()),
            9 => Some(Self::gf9()),
            25 => Some(Self::gf25()),
            _ => None,
        }
    }

    fn build(p: u32, modulus: Vec<u32>) -> Self {
        let degree = modulus.len() - 1;
        let order = p.pow(degree as u32);
        let pow_p = (0..=degree).map(|i| p.saturating_pow(i as u32)).collect();
        let mut inner = FieldInner {
            p,
            degree,
            modulus,
            order,
            pow_p,
            add_table: None,
            tables: None,
        };
        let q = order as u64;
        if degree > 1 && q <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..order {
                for b in 0..order {
                    t[(a as u64 * q + b as u64) as usize] = inner.add_digits(a, b);
                }
            }
            inner.add_table = Some(t);
        }
        if q <= LOG_TABLE_LIMIT && q > 2 {
            inner.tables = Some(inner.build_tables());
        }
        FieldSpec(Arc::new(inner))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    /// Monic modulus, low to high.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// The generator `t` of the extension (or `0` in a prime field, where `t = X` reduces to 0).
    pub fn gen(&self) -> FieldElement {
        if self.degree() == 1 {
            self.zero()
        } else {
            self.element(self.0.p)
        }
    }

    /// Wraps a raw code. Panics if out of range.
    pub fn element(&self, code: u32) -> FieldElement {
        assert!(code < self.order(), "code {code} out of range for {self}");
        FieldElement {
            field: self.clone(),
            code,
        }
    }

    /// Element from coefficients `c_0, c_1, ...`, each reduced mod `p`; higher powers reduced by the modulus.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> FieldElement {
        let p = self.0.p as i64;
        let mut c: Vec<u32> = coeffs.iter().map(|&x| x.rem_euclid(p) as u32).collect();
        if c.len() > self.degree() {
            c = poly_rem(&c, &self.0.modulus, p as u64);
        }
        c.resize(self.degree(), 0);
        self.element(self.0.pack(&c))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        self.element(self.int_code(n))
    }

    pub fn int_code(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.p as i64) as u32
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |c| self.element(c))
    }

    // Code-level arithmetic; callers guarantee codes are in range.

    #[inline]
    pub fn add_code(&self, a: u32, b: u32) -> u32 {
        let f = &*self.0;
        if f.degree == 1 {
            let s = a as u64 + b as u64;
            let p = f.p as u64;
            return (if s >= p { s - p } else { s }) as u32;
        }
        if let Some(t) = &f.add_table {
            return t[a as usize * f.order as usize + b as usize];
        }
        f.add_digits(a, b)
    }

    #[inline]
    pub fn neg_code(&self, a: u32) -> u32 {
        let f = &*self.0;
        if f.degree == 1 {
            return if a == 0 { 0 } else { f.p - a };
        }
        let digits = f.unpack(a);
        let neg: Vec<u32> = digits
            .iter()
            .map(|&d| if d == 0 { 0 } else { f.p - d })
            .collect();
        f.pack(&neg)
    }

    #[inline]
    pub fn sub_code(&self, a: u32, b: u32) -> u32 {
        self.add_code(a, self.neg_code(b))
    }

    #[inline]
    pub fn mul_code(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let f = &*self.0;
        if let Some(t) = &f.tables {
            return t.exp[(t.log[a as usize] + t.log[b as usize]) as usize];
        }
        f.mul_slow(a, b)
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv_code(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let f = &*self.0;
        if let Some(t) = &f.tables {
            let l = t.log[a as usize];
            let q1 = f.order - 1;
            return Some(t.exp[((q1 - l) % q1) as usize]);
        }
        Some(f.pow_slow(a, f.order as u64 - 2))
    }

    pub fn pow_code(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let f = &*self.0;
        if let Some(t) = &f.tables {
            let q1 = (f.order - 1) as u64;
            let l = (t.log[a as usize] as u64 * (e % q1)) % q1;
            return t.exp[l as usize];
        }
        f.pow_slow(a, e)
    }

    /// Coefficients `c_0..c_{n-1}` of a code.
    pub fn coeffs_of(&self, code: u32) -> Vec<u32> {
        self.0.unpack(code)
    }

    /// Returns an element of multiplicative order exactly `n`: the one with the
    /// smallest code, i.e. lexicographically smallest with the constant term compared last.
    pub fn root_of_unity(&self, n: u64) -> Result<FieldElement, FieldError> {
        let q1 = self.order() as u64 - 1;
        if n == 0 || !q1.is_multiple_of(n) {
            return Err(FieldError::NoSuchRoot {
                n,
                order: self.order() as u64,
            });
        }
        let divisors: Vec<u64> = prime_factors(n).into_iter().map(|r| n / r).collect();
        for code in 1..self.order() {
            if self.pow_code(code, n) != 1 {
                continue;
            }
            if divisors.iter().all(|&d| self.pow_code(code, d) != 1) {
                return Ok(self.element(code));
            }
        }
        unreachable!("the multiplicative group is cyclic, so an element of order {n} exists")
    }

    /// Multiplicative order of a nonzero code.
    pub fn multiplicative_order(&self, code: u32) -> Option<u64> {
        if code == 0 {
            return None;
        }
        let q1 = self.order() as u64 - 1;
        let mut ord = q1;
        for r in prime_factors(q1) {
            while ord.is_multiple_of(r) && self.pow_code(code, ord / r) == 1 {
                ord /= r;
            }
        }
        Some(ord)
    }

    pub fn format_code(&self, code: u32) -> String {
        format_poly_asc(&self.0.unpack(code))
    }
}

impl FieldInner {
    fn unpack(&self, mut code: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.degree);
        for _ in 0..self.degree {
            out.push(code % self.p);
            code /= self.p;
        }
        out
    }

    fn pack(&self, digits: &[u32]) -> u32 {
        digits.iter().zip(&self.pow_p).map(|(&d, &w)| d * w).sum()
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        for i in 0..self.degree {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * self.pow_p[i];
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.degree == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let x = self.unpack(a);
        let y = self.unpack(b);
        let mut prod = vec![0u64; 2 * self.degree - 1];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi as u64 * yj as u64) % p;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        let mut r = poly_rem(&prod, &self.modulus, p);
        r.resize(self.degree, 0);
        self.pack(&r)
    }

    fn pow_slow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, a);
            }
            a = self.mul_slow(a, a);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&self) -> Tables {
        let q1 = (self.order - 1) as u64;
        let factors = prime_factors(q1);
        let g = (2..self.order)
            .chain(std::iter::once(1))
            .find(|&g| factors.iter().all(|&r| self.pow_slow(g, q1 / r) != 1))
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * q1 as usize];
        let mut log = vec![0u32; self.order as usize];
        let mut x = 1u32;
        for i in 0..q1 as usize {
            exp[i] = x;
            exp[i + q1 as usize] = x;
            log[x as usize] = i as u32;
            x = self.mul_slow(x, g);
        }
        Tables { exp, log }
    }
}

/// An element tagged with its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: FieldSpec,
    code: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format_code(self.code))
    }
}

impl FieldElement {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    /// Residues `c_0..c_{n-1}`, length equal to the field degree.
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs_of(self.code)
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    pub fn apply(&self, op: Op, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        if self.field != rhs.field {
            return Err(FieldError::MixedFields);
        }
        let f = &self.field;
        let code = match op {
            Op::Add => f.add_code(self.code, rhs.code),
            Op::Sub => f.sub_code(self.code, rhs.code),
            Op::Mul => f.mul_code(self.code, rhs.code),
            Op::Div => {
                let inv = f.inv_code(rhs.code).ok_or(FieldError::DivisionByZero)?;
                f.mul_code(self.code, inv)
            }
        };
        Ok(f.element(code))
    }

    pub fn add(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.apply(Op::Add, rhs)
    }

    pub fn sub(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.apply(Op::Sub, rhs)
    }

    pub fn mul(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.apply(Op::Mul, rhs)
    }

    pub fn div(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.apply(Op::Div, rhs)
    }

    pub fn neg(&self) -> FieldElement {
        self.field.element(self.field.neg_code(self.code))
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        self.field
            .inv_code(self.code)
            .map(|c| self.field.element(c))
            .ok_or(FieldError::DivisionByZero)
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.field.element(self.field.pow_code(self.code, e))
    }

    /// `a^(p^m)`. Negative `m` applies the inverse Frobenius; the map has order
    /// `degree`, so `m` is reduced modulo it.
    pub fn frobenius_power(&self, m: i64) -> FieldElement {
        let n = self.field.degree() as i64;
        let shift = m.rem_euclid(n) as u32;
        let e = (self.field.p() as u64).pow(shift);
        self.pow(e)
    }

    pub fn multiplicative_order(&self) -> Option<u64> {
        self.field.multiplicative_order(self.code)
    }
}
