//! Polynomial assignments over `F_p`, their gradients, and the matroids the
//! gradients induce over the rational function field `F_p(x1..xn)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::field::FieldSpec;
use crate::matrix::MatrixF;
use crate::matroid::{GroundSet, Matroid, MatroidError};
use crate::text::{column_of, key_value, split_list, Lines, ParseError};

mod poly;

pub use poly::Polynomial;

/// Upper bound on candidate monomials in [`bounded_dependence`].
pub const MAX_DEPENDENCE_MONOMIALS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("negative Frobenius shift {shift} for `{element}`: p-th roots are not polynomials")]
    NegativeShift { element: String, shift: i64 },
    #[error("search space of {monomials} monomials exceeds {MAX_DEPENDENCE_MONOMIALS}")]
    SearchSpaceTooLarge { monomials: u64 },
    #[error("{0}")]
    Mismatch(String),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

/// One polynomial per ground element, all in the same `nvars` variables over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyAssignment {
    ground: GroundSet,
    p: u32,
    nvars: usize,
    images: Vec<Polynomial>,
}

impl PolyAssignment {
    pub fn new(ground: GroundSet, images: Vec<Polynomial>) -> Result<Self, DerivationError> {
        if images.len() != ground.len() {
            return Err(DerivationError::Mismatch(format!(
                "{} images for {} elements",
                images.len(),
                ground.len()
            )));
        }
        let Some(first) = images.first() else {
            return Err(DerivationError::Mismatch("empty assignment".into()));
        };
        let (p, nvars) = (first.characteristic(), first.nvars());
        if let Some(i) = images
            .iter()
            .position(|f| f.characteristic() != p || f.nvars() != nvars)
        {
            return Err(DerivationError::Mismatch(format!(
                "image of `{}` is over a different polynomial ring",
                ground.name(i)
            )));
        }
        Ok(Self {
            ground,
            p,
            nvars,
            images,
        })
    }

    /// Labels `1..=n` with images parsed from the given strings.
    pub fn from_strs(p: u32, nvars: usize, images: &[&str]) -> Result<Self, ParseError> {
        let images = images
            .iter()
            .map(|s| Polynomial::parse(s, p, nvars))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(GroundSet::numbered(images.len()), images)
            .map_err(|e| ParseError::invalid(1, 1, e.to_string()))
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn image(&self, e: usize) -> &Polynomial {
        &self.images[e]
    }

    /// `assignment chars=<p> vars=<n> elements=<list>` then `<label> = <poly>` lines.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "assignment chars={} vars={} elements={}\n",
            self.p,
            self.nvars,
            self.ground.names().join(",")
        );
        for (name, f) in self.ground.names().iter().zip(&self.images) {
            s.push_str(&format!("{name} = {f}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = Lines::new(text);
        let what = "`assignment chars=<p> vars=<n> elements=<list>`";
        let (ln, header) = lines.next_line(what)?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 4 || toks[0] != "assignment" {
            return Err(ParseError::expected(ln, 1, what));
        }
        let num = |tok: &str, key: &str| -> Result<u64, ParseError> {
            let v = key_value(tok, key, ln, column_of(header, tok))?;
            v.parse()
                .map_err(|_| ParseError::expected(ln, column_of(header, v), "a number"))
        };
        let p = num(toks[1], "chars")?;
        if !crate::field::is_prime(p) || p > u32::MAX as u64 {
            return Err(ParseError::invalid(
                ln,
                column_of(header, toks[1]),
                format!("characteristic {p} is not prime"),
            ));
        }
        let p = p as u32;
        let nvars = num(toks[2], "vars")? as usize;
        let elems = key_value(toks[3], "elements", ln, column_of(header, toks[3]))?;
        let ground = GroundSet::new(split_list(elems))
            .map_err(|e| ParseError::invalid(ln, column_of(header, elems), e.to_string()))?;
        let mut images: Vec<Option<Polynomial>> = vec![None; ground.len()];
        for _ in 0..ground.len() {
            let (ln, line) = lines.next_line("`<label> = <polynomial>`")?;
            let (label, poly) = line
                .split_once('=')
                .ok_or_else(|| ParseError::expected(ln, 1, "`<label> = <polynomial>`"))?;
            let label = label.trim();
            let e = ground
                .index_of(label)
                .map_err(|e| ParseError::invalid(ln, column_of(line, label), e.to_string()))?;
            if images[e].is_some() {
                return Err(ParseError::invalid(
                    ln,
                    column_of(line, label),
                    format!("`{label}` assigned twice"),
                ));
            }
            let f = Polynomial::parse(poly, p, nvars)
                .map_err(|err| err.at(ln, column_of(line, poly) - 1))?;
            images[e] = Some(f);
        }
        lines.finish()?;
        let images = images
            .into_iter()
            .map(|f| f.expect("each label assigned"))
            .collect();
        Self::new(ground, images).map_err(|e| ParseError::invalid(ln, 1, e.to_string()))
    }
}

/// Entry `(i, e)` is `∂π(e)/∂x_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradientMatrix {
    pub entries: Vec<Vec<Polynomial>>,
}

impl GradientMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn column(&self, e: usize) -> Vec<&Polynomial> {
        self.entries.iter().map(|row| &row[e]).collect()
    }

    /// `(d1,d2,...)` for element `e`.
    pub fn column_text(&self, e: usize) -> String {
        let parts: Vec<String> = self.column(e).iter().map(|f| f.to_string()).collect();
        format!("({})", parts.join(","))
    }

    /// The gradient as a matrix over `F_p` when every entry is constant.
    pub fn constant_matrix(&self) -> Option<MatrixF> {
        let first = self.entries.first()?.first()?;
        let f = FieldSpec::prime(first.characteristic() as u64).ok()?;
        let zero = vec![0; first.nvars()];
        let mut data = Vec::with_capacity(self.rows() * self.cols());
        for row in &self.entries {
            for g in row {
                if g.total_degree().unwrap_or(0) > 0 {
                    return None;
                }
                data.push(g.coefficient(&zero));
            }
        }
        Some(MatrixF::from_codes(&f, self.rows(), self.cols(), data))
    }
}

impl fmt::Display for GradientMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: Vec<String> = (0..self.cols()).map(|e| self.column_text(e)).collect();
        f.write_str(&cols.join(" "))
    }
}

pub fn gradient_matrix(a: &PolyAssignment) -> GradientMatrix {
    let entries = (0..a.nvars)
        .map(|i| {
            a.images
                .iter()
                .map(|f| f.partial_derivative(i).expect("index below nvars"))
                .collect()
        })
        .collect();
    GradientMatrix { entries }
}

/// Rank over `F_p(x1..xn)` of the given columns, by fraction-free elimination:
/// row operations `row <- pivot*row - a*pivot_row` never divide, so every
/// entry stays a polynomial and zero tests are exact.
pub fn rational_rank(columns: &[Vec<Polynomial>]) -> usize {
    let Some(first) = columns.first() else {
        return 0;
    };
    let rows = first.len();
    // a[r][c]
    let mut a: Vec<Vec<Polynomial>> = (0..rows)
        .map(|r| columns.iter().map(|col| col[r].clone()).collect())
        .collect();
    let cols = columns.len();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(piv, rank);
        let pivot_row = a[rank].clone();
        let pv = pivot_row[c].clone();
        for row in a.iter_mut().skip(rank + 1) {
            let x = row[c].clone();
            if x.is_zero() {
                continue;
            }
            for j in c..cols {
                row[j] = pv.mul(&row[j]).sub(&x.mul(&pivot_row[j]));
            }
        }
        rank += 1;
    }
    rank
}

/// The matroid of the gradient columns over `F_p(x1..xn)`, labelled like `a`.
pub fn derivation_matroid(a: &PolyAssignment) -> Matroid {
    let g = gradient_matrix(a);
    let columns: Arc<Vec<Vec<Polynomial>>> = Arc::new(
        (0..g.cols())
            .map(|e| g.column(e).into_iter().cloned().collect())
            .collect(),
    );
    Matroid::from_oracle(a.ground.clone(), move |s: &[usize]| {
        let cols: Vec<Vec<Polynomial>> = s.iter().map(|&e| columns[e].clone()).collect();
        rational_rank(&cols)
    })
}

/// Replaces `π(e)` by `π(e)^(p^m(e))`. `shifts` is indexed like the ground set.
pub fn frobenius_shift(
    a: &PolyAssignment,
    shifts: &[i64],
) -> Result<PolyAssignment, DerivationError> {
    if shifts.len() != a.ground.len() {
        return Err(DerivationError::Mismatch(format!(
            "{} shifts for {} elements",
            shifts.len(),
            a.ground.len()
        )));
    }
    let images = a
        .images
        .iter()
        .zip(shifts)
        .enumerate()
        .map(|(e, (f, &m))| {
            if m < 0 {
                return Err(DerivationError::NegativeShift {
                    element: a.ground.name(e).to_string(),
                    shift: m,
                });
            }
            Ok(f.frobenius(m as u32))
        })
        .collect::<Result<Vec<_>, _>>()?;
    PolyAssignment::new(a.ground.clone(), images)
}

/// Exponent vectors in `s` variables of total degree at most `d`, ascending
/// in graded lexicographic order (`Y1 > Y2 > ...`).
fn monomials(s: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for deg in 0..=d {
        let mut level = Vec::new();
        let mut cur = vec![0u32; s];
        fill(&mut cur, 0, deg, &mut level);
        level.sort();
        out.extend(level);
    }
    out
}

fn fill(cur: &mut Vec<u32>, i: usize, left: u32, out: &mut Vec<Vec<u32>>) {
    if i + 1 == cur.len() {
        cur[i] = left;
        out.push(cur.clone());
        return;
    }
    if cur.is_empty() {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for k in 0..=left {
        cur[i] = k;
        fill(cur, i + 1, left - k, out);
    }
    cur[i] = 0;
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Searches for a nonzero `P(Y1..Ys)` of total degree at most `d` with
/// `P(f_1, ..., f_s) = 0`.
///
/// A returned polynomial certifies algebraic dependence. `None` only means no
/// annihilator of degree at most `d` exists; it says nothing about higher
/// degrees. The result is the kernel element whose largest monomial (graded
/// lexicographic) is as small as possible, scaled to leading coefficient 1.
pub fn bounded_dependence(
    polys: &[Polynomial],
    d: u32,
) -> Result<Option<Polynomial>, DerivationError> {
    let Some(first) = polys.first() else {
        return Err(DerivationError::Mismatch("no polynomials given".into()));
    };
    let (p, nvars) = (first.characteristic(), first.nvars());
    if polys
        .iter()
        .any(|f| f.characteristic() != p || f.nvars() != nvars)
    {
        return Err(DerivationError::Mismatch(
            "polynomials over different rings".into(),
        ));
    }
    let s = polys.len();
    let count = binomial(s as u64 + d as u64, d as u64);
    if count > MAX_DEPENDENCE_MONOMIALS {
        return Err(DerivationError::SearchSpaceTooLarge { monomials: count });
    }
    let monos = monomials(s, d);
    let powers: Vec<Vec<Polynomial>> = polys
        .iter()
        .map(|f| {
            let mut v = vec![Polynomial::constant(p, nvars, 1)];
            for k in 1..=d as usize {
                let next = v[k - 1].mul(f);
                v.push(next);
            }
            v
        })
        .collect();
    let images: Vec<Polynomial> = monos
        .par_iter()
        .map(|a| {
            a.iter()
                .zip(&powers)
                .fold(Polynomial::constant(p, nvars, 1), |acc, (&k, pw)| {
                    acc.mul(&pw[k as usize])
                })
        })
        .collect();
    let mut row_of: HashMap<Vec<u32>, usize> = HashMap::new();
    for img in &images {
        for (e, _) in img.terms() {
            let next = row_of.len();
            row_of.entry(e.to_vec()).or_insert(next);
        }
    }
    let field = FieldSpec::prime(p as u64).expect("prime characteristic");
    let (rows, cols) = (row_of.len(), monos.len());
    let mut data = vec![0u32; rows * cols];
    for (c, img) in images.iter().enumerate() {
        for (e, coeff) in img.terms() {
            data[row_of[e] * cols + c] = coeff;
        }
    }
    let m = MatrixF::from_codes(&field, rows, cols, data);
    let Some(v) = m.kernel().into_iter().next() else {
        return Ok(None);
    };
    let terms = monos
        .into_iter()
        .zip(v)
        .filter(|(_, c)| *c != 0)
        .map(|(e, c)| (e, c as i64));
    Ok(Some(Polynomial::from_terms(p, s, terms)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_six() -> PolyAssignment {
        PolyAssignment::from_strs(
            3,
            3,
            &[
                "x1",
                "x2^3",
                "x3",
                "x1 + x2^3",
                "x1 + x3",
                "x1 + x2^3 + 2*x3",
            ],
        )
        .unwrap()
    }

    #[test]
    fn six_element_gradients() {
        let g = gradient_matrix(&example_six());
        assert_eq!(
            g.to_string(),
            "(1,0,0) (0,0,0) (0,0,1) (1,0,0) (1,0,1) (1,0,2)"
        );
        let m = derivation_matroid(&example_six());
        assert_eq!(m.rank_of(&["2"]).unwrap(), 0);
        assert_eq!(m.rank_of(&["1", "4"]).unwrap(), 1);
        assert_eq!(m.rank_of(&["1", "3", "6"]).unwrap(), 2);
        assert_eq!(m.rank_of(&["3", "5", "6"]).unwrap(), 2);
        let s = m.simplification_data();
        assert_eq!(s.loops, vec![1]);
        assert!(s.parallel_classes.contains(&vec![0, 3]));
    }

    #[test]
    fn rational_rank_with_polynomial_entries() {
        let x = |s: &str| Polynomial::parse(s, 5, 2).unwrap();
        // columns (x1, x2) and (x1*x2, x2^2) are parallel over F_5(x1, x2)
        let cols = vec![vec![x("x1"), x("x2")], vec![x("x1*x2"), x("x2^2")]];
        assert_eq!(rational_rank(&cols), 1);
        let cols = vec![vec![x("x1"), x("x2")], vec![x("x2"), x("x1")]];
        assert_eq!(rational_rank(&cols), 2);
    }

    #[test]
    fn frobenius_shift_examples() {
        let pi1 = PolyAssignment::from_strs(3, 2, &["x1", "x2", "x1 + x2"]).unwrap();
        let pi2 = PolyAssignment::from_strs(3, 2, &["x1", "x2", "(x1 + x2)^3"]).unwrap();
        assert_eq!(frobenius_shift(&pi1, &[0, 0, 1]).unwrap(), pi2);
        assert_eq!(frobenius_shift(&pi1, &[0, 0, 0]).unwrap(), pi1);
        assert!(matches!(
            frobenius_shift(&pi1, &[0, 0, -1]),
            Err(DerivationError::NegativeShift { .. })
        ));
        let m2 = derivation_matroid(&pi2);
        assert_eq!(m2.simplification_data().loops, vec![2]);
    }

    #[test]
    fn annihilators() {
        let q = |s: &str, n| Polynomial::parse(s, 3, n).unwrap();
        let p = bounded_dependence(&[q("x1", 2), q("x2^3", 2), q("x1 + x2^3", 2)], 1)
            .unwrap()
            .unwrap();
        assert_eq!(
            p,
            Polynomial::parse_with("Y1 + Y2 - Y3", 3, 3, 'Y').unwrap()
        );
        let p = bounded_dependence(&[q("x1", 1), q("x1^2", 1)], 2)
            .unwrap()
            .unwrap();
        assert_eq!(p.display_with("Y"), "Y1^2 + 2*Y2");
        assert!(bounded_dependence(&[q("x1", 2), q("x2", 2)], 3)
            .unwrap()
            .is_none());
    }

    #[test]
    fn search_space_is_bounded() {
        let f = Polynomial::parse("x1", 3, 1).unwrap();
        let many = vec![f; 30];
        assert!(matches!(
            bounded_dependence(&many, 6),
            Err(DerivationError::SearchSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn assignment_text_round_trip() {
        let a = example_six();
        let text = a.to_text();
        assert!(text.starts_with("assignment chars=3 vars=3 elements=1,2,3,4,5,6\n1 = x1\n"));
        assert_eq!(PolyAssignment::parse(&text).unwrap(), a);
    }
}
