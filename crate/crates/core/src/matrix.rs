//! Dense matrices over a [`FieldSpec`] with exact rank and determinant.

use std::fmt;

use thiserror::Error;

use crate::field::{parse_element, parse_field, FieldElement, FieldSpec};
use crate::text::{column_of, Lines, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix is {rows}x{cols}, not square")]
    NonSquare { rows: usize, cols: usize },
    #[error("block grid is ragged: {0}")]
    RaggedBlocks(String),
    #[error("entries belong to different fields")]
    MixedFields,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct MatrixF {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for MatrixF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl MatrixF {
    pub fn new(
        field: &FieldSpec,
        rows: usize,
        cols: usize,
        entries: &[FieldElement],
    ) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|e| e.field() != field) {
            return Err(MatrixError::MixedFields);
        }
        Ok(Self {
            field: field.clone(),
            rows,
            cols,
            data: entries.iter().map(FieldElement::code).collect(),
        })
    }

    /// Builds from raw codes, row-major. Panics on a length mismatch.
    pub fn from_codes(field: &FieldSpec, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&c| c < field.order()));
        Self {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Rows of small integers, mapped into the prime subfield.
    pub fn from_ints(field: &FieldSpec, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c);
                row.iter().map(|&x| field.int_code(x))
            })
            .collect();
        Self::from_codes(field, r, c, data)
    }

    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Self::from_codes(field, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        Self::scalar(field, n, &field.one())
    }

    /// `c * I_n`.
    pub fn scalar(field: &FieldSpec, n: usize, c: &FieldElement) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = c.code();
        }
        m
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn code(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.field.element(self.code(r, c))
    }

    pub fn set(&mut self, r: usize, c: usize, v: &FieldElement) -> Result<(), MatrixError> {
        if v.field() != &self.field {
            return Err(MatrixError::MixedFields);
        }
        self.data[r * self.cols + c] = v.code();
        Ok(())
    }

    pub fn codes(&self) -> &[u32] {
        &self.data
    }

    /// Column `c` as codes.
    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.code(r, c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![0; self.data.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                data[c * self.rows + r] = self.code(r, c);
            }
        }
        Self::from_codes(&self.field, self.cols, self.rows, data)
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            data.extend(cols.iter().map(|&c| self.code(r, c)));
        }
        Self::from_codes(&self.field, self.rows, cols.len(), data)
    }

    fn check_same(&self, other: &Self) -> Result<(), MatrixError> {
        if self.field != other.field {
            return Err(MatrixError::MixedFields);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_same(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(MatrixError::DimensionMismatch("add".into()));
        }
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add_code(a, b))
            .collect();
        Ok(Self::from_codes(f, self.rows, self.cols, data))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.neg_code(a)).collect();
        Self::from_codes(f, self.rows, self.cols, data)
    }

    pub fn scale(&self, c: &FieldElement) -> Result<Self, MatrixError> {
        if c.field() != &self.field {
            return Err(MatrixError::MixedFields);
        }
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.mul_code(a, c.code())).collect();
        Ok(Self::from_codes(f, self.rows, self.cols, data))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_same(other)?;
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut data = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.code(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    data[idx] = f.add_code(data[idx], f.mul_code(a, other.code(k, j)));
                }
            }
        }
        Ok(Self::from_codes(f, self.rows, other.cols, data))
    }

    /// Applies `v -> M v` to a column vector of codes.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                (0..self.cols).fold(0, |acc, c| {
                    f.add_code(acc, f.mul_code(self.code(r, c), v[c]))
                })
            })
            .collect()
    }

    /// Rank by Gaussian elimination, pivoting on the first nonzero entry of each column.
    pub fn rank(&self) -> usize {
        self.eliminate().0
    }

    /// Rank of the submatrix formed by the given columns, without materializing it.
    pub fn rank_of_columns(&self, cols: &[usize]) -> usize {
        let mut ech = Echelon::new(&self.field, self.rows);
        let mut scratch = vec![0u32; self.rows];
        for &c in cols {
            for (r, s) in scratch.iter_mut().enumerate() {
                *s = self.code(r, c);
            }
            ech.push(&mut scratch);
        }
        ech.rank()
    }

    /// Returns `(rank, det)` where `det` is only meaningful for square input.
    fn eliminate(&self) -> (usize, u32) {
        let f = &self.field;
        let mut a = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0usize;
        let mut det = 1u32;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(piv) = (rank..rows).find(|&r| a[r * cols + c] != 0) else {
                det = 0;
                continue;
            };
            if piv != rank {
                for j in 0..cols {
                    a.swap(piv * cols + j, rank * cols + j);
                }
                det = f.neg_code(det);
            }
            let pv = a[rank * cols + c];
            det = f.mul_code(det, pv);
            let inv = f.inv_code(pv).expect("pivot is nonzero");
            for r in rank + 1..rows {
                let x = a[r * cols + c];
                if x == 0 {
                    continue;
                }
                let factor = f.mul_code(x, inv);
                for j in c..cols {
                    let sub = f.mul_code(factor, a[rank * cols + j]);
                    a[r * cols + j] = f.sub_code(a[r * cols + j], sub);
                }
            }
            rank += 1;
        }
        if rank < rows {
            det = 0;
        }
        (rank, det)
    }

    pub fn determinant(&self) -> Result<FieldElement, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows == 0 {
            return Ok(self.field.one());
        }
        Ok(self.field.element(self.eliminate().1))
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (MatrixF, Vec<usize>) {
        let f = &self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut pivots = Vec::new();
        for c in 0..cols {
            let r0 = pivots.len();
            if r0 == rows {
                break;
            }
            let Some(piv) = (r0..rows).find(|&r| a[r * cols + c] != 0) else {
                continue;
            };
            for j in 0..cols {
                a.swap(piv * cols + j, r0 * cols + j);
            }
            let inv = f.inv_code(a[r0 * cols + c]).expect("pivot is nonzero");
            for j in c..cols {
                a[r0 * cols + j] = f.mul_code(a[r0 * cols + j], inv);
            }
            for r in 0..rows {
                let x = a[r * cols + c];
                if r == r0 || x == 0 {
                    continue;
                }
                for j in c..cols {
                    let sub = f.mul_code(x, a[r0 * cols + j]);
                    a[r * cols + j] = f.sub_code(a[r * cols + j], sub);
                }
            }
            pivots.push(c);
        }
        (MatrixF::from_codes(f, rows, cols, a), pivots)
    }

    /// Basis of `{v : self * v = 0}`, one vector per non-pivot column `c` of the
    /// reduced form, with `v[c] = 1` and zero at the other free columns.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![0u32; self.cols];
                v[free] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg_code(r.code(i, free));
                }
                v
            })
            .collect()
    }

    /// Concatenates a grid of blocks. Block heights must agree along each grid
    /// row and widths along each grid column.
    pub fn block_assemble(grid: &[Vec<MatrixF>]) -> Result<MatrixF, MatrixError> {
        let first = grid
            .first()
            .and_then(|r| r.first())
            .ok_or_else(|| MatrixError::RaggedBlocks("empty grid".into()))?;
        let field = first.field.clone();
        let ncols = grid[0].len();
        if grid.iter().any(|r| r.len() != ncols) {
            return Err(MatrixError::RaggedBlocks(
                "grid rows have different lengths".into(),
            ));
        }
        if grid.iter().flatten().any(|b| b.field != field) {
            return Err(MatrixError::MixedFields);
        }
        let heights: Vec<usize> = grid.iter().map(|r| r[0].rows).collect();
        let widths: Vec<usize> = grid[0].iter().map(|b| b.cols).collect();
        for (i, row) in grid.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                if b.rows != heights[i] || b.cols != widths[j] {
                    return Err(MatrixError::RaggedBlocks(format!(
                        "block ({i},{j}) is {}x{}, expected {}x{}",
                        b.rows, b.cols, heights[i], widths[j]
                    )));
                }
            }
        }
        let rows: usize = heights.iter().sum();
        let cols: usize = widths.iter().sum();
        let mut data = Vec::with_capacity(rows * cols);
        for (i, row) in grid.iter().enumerate() {
            for r in 0..heights[i] {
                for b in row {
                    data.extend_from_slice(&b.data[r * b.cols..(r + 1) * b.cols]);
                }
            }
        }
        Ok(MatrixF::from_codes(&field, rows, cols, data))
    }

    /// `matrix <rows> <cols> over <field>` followed by one line per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("matrix {} {} over {}\n", self.rows, self.cols, self.field);
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| self.field.format_code(self.code(r, c)))
                .collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self, ParseError> {
        let mut lines = Lines::new(text);
        let m = Self::parse_lines(&mut lines)?;
        lines.finish()?;
        Ok(m)
    }

    pub(crate) fn parse_lines(lines: &mut Lines<'_>) -> Result<Self, ParseError> {
        let (ln, header) = lines.next_line("`matrix <rows> <cols> over <field>`")?;
        let rest = header
            .strip_prefix("matrix ")
            .ok_or_else(|| ParseError::expected(ln, 1, "`matrix`"))?;
        let mut parts = rest.splitn(3, ' ');
        let dim = |tok: Option<&str>, what: &str| -> Result<usize, ParseError> {
            let t = tok.unwrap_or("");
            t.parse()
                .map_err(|_| ParseError::expected(ln, column_of(header, t), what.to_string()))
        };
        let rows = dim(parts.next(), "row count")?;
        let cols = dim(parts.next(), "column count")?;
        let tail = parts.next().unwrap_or("");
        let field_text = tail
            .strip_prefix("over ")
            .ok_or_else(|| ParseError::expected(ln, column_of(header, tail), "`over <field>`"))?;
        let field =
            parse_field(field_text).map_err(|e| e.at(ln, column_of(header, field_text) - 1))?;
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let (ln, line) = lines.next_line(&format!("matrix row {}", r + 1))?;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != cols {
                return Err(ParseError::expected(
                    ln,
                    1,
                    format!("{cols} entries, found {}", toks.len()),
                ));
            }
            for t in toks {
                let e = parse_element(&field, t).map_err(|e| e.at(ln, column_of(line, t) - 1))?;
                data.push(e.code());
            }
        }
        Ok(Self::from_codes(&field, rows, cols, data))
    }
}

impl fmt::Display for MatrixF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Incrementally maintained echelon basis of a column span.
///
/// Columns are pushed one at a time; [`Echelon::truncate`] rolls back to an
/// earlier rank, which makes depth-first subset enumeration cheap.
#[derive(Clone)]
pub struct Echelon {
    field: FieldSpec,
    dim: usize,
    /// Basis vectors, each normalized to 1 at its pivot and zero at earlier pivots.
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: &FieldSpec, dim: usize) -> Self {
        Self {
            field: field.clone(),
            dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Reduces `v` in place against the basis; returns true if it was independent
    /// (and was added).
    pub fn push(&mut self, v: &mut [u32]) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        if self.basis.len() == self.dim {
            return false;
        }
        let f = &self.field;
        for (b, &piv) in self.basis.iter().zip(&self.pivots) {
            let c = v[piv];
            if c == 0 {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(b) {
                if y != 0 {
                    *x = f.sub_code(*x, f.mul_code(c, y));
                }
            }
        }
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv_code(v[piv]).expect("nonzero");
        let b: Vec<u32> = v.iter().map(|&x| f.mul_code(x, inv)).collect();
        self.basis.push(b);
        self.pivots.push(piv);
        true
    }

    /// Whether `v` lies in the current span (leaves the basis unchanged).
    pub fn contains(&self, v: &[u32]) -> bool {
        let f = &self.field;
        let mut w = v.to_vec();
        for (b, &piv) in self.basis.iter().zip(&self.pivots) {
            let c = w[piv];
            if c == 0 {
                continue;
            }
            for (x, &y) in w.iter_mut().zip(b) {
                *x = f.sub_code(*x, f.mul_code(c, y));
            }
        }
        w.iter().all(|&x| x == 0)
    }

    pub fn truncate(&mut self, rank: usize) {
        self.basis.truncate(rank);
        self.pivots.truncate(rank);
    }

    /// Pushes the given columns of `m`; returns the rank gained.
    pub fn push_columns(
        &mut self,
        m: &MatrixF,
        cols: std::ops::Range<usize>,
        scratch: &mut [u32],
    ) -> usize {
        let before = self.rank();
        for c in cols {
            for (r, s) in scratch.iter_mut().enumerate() {
                *s = m.code(r, c);
            }
            self.push(scratch);
        }
        self.rank() - before
    }
}
