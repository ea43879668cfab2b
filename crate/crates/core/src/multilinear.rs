//! k-linear representations: a matrix whose columns come in blocks of `k`, one
//! block per matroid element, with `r(X) = rank(blocks of X) / k`.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::field::{parse_field, FieldSpec};
use crate::matrix::{Echelon, MatrixF};
use crate::matroid::{GroundSet, Matroid, MatroidError};
use crate::text::{column_of, key_value, split_list, Lines, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultilinearError {
    #[error("block size k must be at least 1")]
    ZeroK,
    #[error("{labels} labels with k={k} need {expected} columns, matrix has {cols}")]
    ShapeMismatch {
        labels: usize,
        k: usize,
        expected: usize,
        cols: usize,
    },
    #[error("not a {k}-linear representation: {{{}}} has rank {rank}", subset.join(","))]
    InvalidRepresentation {
        k: usize,
        subset: Vec<String>,
        rank: usize,
    },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

/// Matrix plus block size plus element labels. Element `l` owns columns
/// `l*k .. (l+1)*k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KLinearRep {
    matrix: MatrixF,
    k: usize,
    labels: GroundSet,
}

impl KLinearRep {
    pub fn new(matrix: MatrixF, k: usize, labels: GroundSet) -> Result<Self, MultilinearError> {
        if k == 0 {
            return Err(MultilinearError::ZeroK);
        }
        if labels.len() * k != matrix.cols() {
            return Err(MultilinearError::ShapeMismatch {
                labels: labels.len(),
                k,
                expected: labels.len() * k,
                cols: matrix.cols(),
            });
        }
        Ok(Self { matrix, k, labels })
    }

    pub fn matrix(&self) -> &MatrixF {
        &self.matrix
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> &FieldSpec {
        self.matrix.field()
    }

    pub fn labels(&self) -> &GroundSet {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Column block of element `l`.
    pub fn block(&self, l: usize) -> std::ops::Range<usize> {
        l * self.k..(l + 1) * self.k
    }

    /// Raw column rank of the blocks of `set`.
    pub fn column_rank(&self, set: &[usize]) -> usize {
        let mut ech = Echelon::new(self.field(), self.matrix.rows());
        let mut scratch = vec![0u32; self.matrix.rows()];
        for &l in set {
            ech.push_columns(&self.matrix, self.block(l), &mut scratch);
        }
        ech.rank()
    }

    /// `column_rank / k`, rounded down.
    pub fn rank_of_elements(&self, set: &[usize]) -> usize {
        self.column_rank(set) / self.k
    }

    /// `klinear k=<k> over <field> elements=<list>` followed by the matrix.
    pub fn to_text(&self) -> String {
        format!(
            "klinear k={} over {} elements={}\n{}",
            self.k,
            self.field(),
            self.labels.names().join(","),
            self.matrix.to_text()
        )
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = Lines::new(text);
        let rep = Self::parse_lines(&mut lines)?;
        lines.finish()?;
        Ok(rep)
    }

    pub(crate) fn parse_lines(lines: &mut Lines<'_>) -> Result<Self, ParseError> {
        let what = "`klinear k=<k> over <field> elements=<list>`";
        let (ln, header) = lines.next_line(what)?;
        let rest = header
            .strip_prefix("klinear ")
            .ok_or_else(|| ParseError::expected(ln, 1, what))?;
        let (k_tok, rest) = rest.split_once(' ').unwrap_or((rest, ""));
        let k_s = key_value(k_tok, "k", ln, column_of(header, k_tok))?;
        let k: usize = k_s
            .parse()
            .map_err(|_| ParseError::expected(ln, column_of(header, k_s), "block size"))?;
        let rest = rest
            .strip_prefix("over ")
            .ok_or_else(|| ParseError::expected(ln, column_of(header, rest), "`over <field>`"))?;
        let (field_text, elems) = rest.rsplit_once(" elements=").ok_or_else(|| {
            ParseError::expected(ln, column_of(header, rest), "`elements=<list>`")
        })?;
        let field =
            parse_field(field_text).map_err(|e| e.at(ln, column_of(header, field_text) - 1))?;
        let labels = GroundSet::new(split_list(elems))
            .map_err(|e| ParseError::invalid(ln, column_of(header, elems), e.to_string()))?;
        let matrix_line = lines.peek_line().map(|(n, _)| n).unwrap_or(ln + 1);
        let matrix = MatrixF::parse_lines(lines)?;
        if matrix.field() != &field {
            return Err(ParseError::invalid(
                matrix_line,
                1,
                format!("matrix is over {}, header says {field}", matrix.field()),
            ));
        }
        Self::new(matrix, k, labels).map_err(|e| ParseError::invalid(matrix_line, 1, e.to_string()))
    }
}

impl fmt::Display for KLinearRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// A subset whose column rank is not a multiple of `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub subset: Vec<usize>,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Invalid(Witness),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

/// Checks that every subset of at most `rank(matrix)` elements has column rank
/// divisible by `k`. That bound is complete: `v` independent columns lie in at
/// most `v` blocks, so any subset of bad rank `v` contains a bad subset of at
/// most `v` elements.
///
/// Elements are first split into components whose blocks share no nonzero
/// row. Column rank is additive across components, so a minimal witness lies
/// inside one of them and each is searched on its own.
///
/// The witness is the first bad subset in order of size, then lexicographic
/// order, independent of thread scheduling.
pub fn validate_klinear(rep: &KLinearRep) -> Validity {
    if rep.k == 1 {
        return Validity::Valid;
    }
    let comps = row_components(rep);
    if comps.len() == 1 {
        return validate_component(rep);
    }
    let best = comps
        .iter()
        .filter_map(|elems| {
            let cols: Vec<usize> = elems.iter().flat_map(|&e| rep.block(e)).collect();
            let sub = KLinearRep {
                matrix: rep.matrix.select_columns(&cols),
                k: rep.k,
                labels: GroundSet::numbered(elems.len()),
            };
            match validate_component(&sub) {
                Validity::Valid => None,
                Validity::Invalid(w) => Some(Witness {
                    subset: w.subset.iter().map(|&i| elems[i]).collect(),
                    rank: w.rank,
                }),
            }
        })
        .min_by(|a, b| (a.subset.len(), &a.subset).cmp(&(b.subset.len(), &b.subset)));
    match best {
        Some(w) => Validity::Invalid(w),
        None => Validity::Valid,
    }
}

/// Elements grouped by connectivity through shared nonzero rows, each group
/// sorted and the groups ordered by least element.
fn row_components(rep: &KLinearRep) -> Vec<Vec<usize>> {
    let n = rep.len();
    let mut comp: Vec<usize> = (0..n).collect();
    fn root(comp: &mut [usize], mut x: usize) -> usize {
        while comp[x] != x {
            comp[x] = comp[comp[x]];
            x = comp[x];
        }
        x
    }
    for r in 0..rep.matrix.rows() {
        let mut owner: Option<usize> = None;
        for e in 0..n {
            if rep.block(e).any(|c| rep.matrix.code(r, c) != 0) {
                match owner {
                    None => owner = Some(e),
                    Some(o) => {
                        let (a, b) = (root(&mut comp, o), root(&mut comp, e));
                        comp[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for e in 0..n {
        let r = root(&mut comp, e);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(e);
    }
    groups
}

fn validate_component(rep: &KLinearRep) -> Validity {
    let n = rep.len();
    let max = rep.matrix.rank().min(n);
    // Smallest witness size found so far by any worker; larger sets are skipped.
    let bound = AtomicUsize::new(max + 1);
    let best = (0..n)
        .into_par_iter()
        .filter_map(|first| {
            let mut search = Search {
                rep,
                max,
                bound: &bound,
                ech: Echelon::new(rep.field(), rep.matrix.rows()),
                scratch: vec![0; rep.matrix.rows()],
                stack: Vec::with_capacity(max),
                best: None,
            };
            search.visit(first);
            search.best
        })
        .min_by(|a, b| (a.subset.len(), &a.subset).cmp(&(b.subset.len(), &b.subset)));
    match best {
        Some(w) => Validity::Invalid(w),
        None => Validity::Valid,
    }
}

struct Search<'a> {
    rep: &'a KLinearRep,
    max: usize,
    bound: &'a AtomicUsize,
    ech: Echelon,
    scratch: Vec<u32>,
    stack: Vec<usize>,
    best: Option<Witness>,
}

impl Search<'_> {
    /// Depth-first over subsets extending the stack by `e`, in lexicographic
    /// preorder, so the first witness of each size is the lexicographically least.
    fn visit(&mut self, e: usize) {
        let before = self.ech.rank();
        self.ech
            .push_columns(&self.rep.matrix, self.rep.block(e), &mut self.scratch);
        self.stack.push(e);
        let rank = self.ech.rank();
        let size = self.stack.len();
        if !rank.is_multiple_of(self.rep.k) {
            if self.best.as_ref().is_none_or(|w| size < w.subset.len()) {
                self.best = Some(Witness {
                    subset: self.stack.clone(),
                    rank,
                });
                self.bound.fetch_min(size, Ordering::Relaxed);
            }
        } else {
            let limit = self.max.min(self.bound.load(Ordering::Relaxed)).min(
                self.best
                    .as_ref()
                    .map_or(usize::MAX, |w| w.subset.len() - 1),
            );
            if size < limit {
                for next in e + 1..self.rep.len() {
                    self.visit(next);
                }
            }
        }
        self.stack.pop();
        self.ech.truncate(before);
    }
}

/// Block-diagonal representation of the direct sum. Parts must share `k` and
/// the field; labels follow the same collision rule as
/// [`crate::matroid::direct_sum`].
pub fn direct_sum_rep(parts: &[KLinearRep]) -> Result<KLinearRep, MultilinearError> {
    let first = parts
        .first()
        .ok_or_else(|| MultilinearError::PreconditionViolated("no parts".into()))?;
    if parts
        .iter()
        .any(|p| p.k != first.k || p.field() != first.field())
    {
        return Err(MultilinearError::PreconditionViolated(
            "parts must share the block size and the field".into(),
        ));
    }
    let f = first.field();
    let grid: Vec<Vec<MatrixF>> = parts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            parts
                .iter()
                .enumerate()
                .map(|(j, q)| {
                    if i == j {
                        p.matrix.clone()
                    } else {
                        MatrixF::zeros(f, p.matrix.rows(), q.matrix.cols())
                    }
                })
                .collect()
        })
        .collect();
    let matrix = MatrixF::block_assemble(&grid)
        .map_err(|e| MultilinearError::PreconditionViolated(e.to_string()))?;
    let mut seen = std::collections::HashSet::new();
    let collide = parts
        .iter()
        .flat_map(|p| p.labels.names())
        .any(|l| !seen.insert(l.as_str()));
    let names = parts.iter().enumerate().flat_map(|(i, p)| {
        p.labels.names().iter().map(move |l| {
            if collide {
                format!("{i}:{l}")
            } else {
                l.clone()
            }
        })
    });
    let labels = GroundSet::new(names)?;
    KLinearRep::new(matrix, first.k, labels)
}

/// The matroid of a valid representation.
pub fn matroid_from_klinear(rep: KLinearRep) -> Result<Matroid, MultilinearError> {
    if let Validity::Invalid(w) = validate_klinear(&rep) {
        return Err(MultilinearError::InvalidRepresentation {
            k: rep.k,
            subset: rep.labels.labels_of(&w.subset),
            rank: w.rank,
        });
    }
    Ok(Matroid::from_klinear(Arc::new(rep)))
}

/// Field size limit for [`search_rank3_rep`].
pub const SEARCH_MAX_FIELD: u32 = 9;
/// Backtracking node limit for [`search_rank3_rep`].
pub const SEARCH_NODE_BUDGET: u64 = 50_000_000;

/// Exhaustive search for a `3 x |E|` matrix over `f` with matroid exactly `m`.
///
/// The lexicographically first basis is pinned to the standard basis and every
/// other element ranges over projective points normalized to have first nonzero
/// coordinate 1. Any representation can be brought to that form by a change of
/// basis and column scaling, so `None` means no representation exists.
pub fn search_rank3_rep(m: &Matroid, f: &FieldSpec) -> Result<Option<MatrixF>, MultilinearError> {
    let pre = |s: String| Err(MultilinearError::PreconditionViolated(s));
    if f.order() > SEARCH_MAX_FIELD {
        return pre(format!(
            "field {f} has more than {SEARCH_MAX_FIELD} elements"
        ));
    }
    if m.full_rank() != 3 {
        return pre(format!("matroid has rank {}, not 3", m.full_rank()));
    }
    if !m.is_simple() {
        return pre("matroid is not simple".into());
    }
    let n = m.len();
    let mut basis = None;
    'find: for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if m.rank(&[a, b, c]) == 3 {
                    basis = Some([a, b, c]);
                    break 'find;
                }
            }
        }
    }
    let basis = basis.expect("rank 3 has a basis");
    let q = f.order();
    let points: Vec<[u32; 3]> = (0..q * q * q)
        .map(|c| [c / (q * q), (c / q) % q, c % q])
        .filter(|v| v.iter().find(|&&x| x != 0) == Some(&1))
        .collect();
    let mut order: Vec<usize> = basis.to_vec();
    order.extend((0..n).filter(|e| !basis.contains(e)));
    let mut assigned: Vec<[u32; 3]> = vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    // dependent[i][j][l] for positions in `order`, i < j < l
    let dep = |i: usize, j: usize, l: usize| m.rank(&[order[i], order[j], order[l]]) <= 2;
    let mut nodes = 0u64;
    let found = place(f, &points, &dep, 3, n, &mut assigned, &mut nodes);
    if nodes > SEARCH_NODE_BUDGET {
        return pre(format!("search exceeded {SEARCH_NODE_BUDGET} nodes"));
    }
    if !found {
        return Ok(None);
    }
    let mut data = vec![0u32; 3 * n];
    for (pos, &e) in order.iter().enumerate() {
        for r in 0..3 {
            data[r * n + e] = assigned[pos][r];
        }
    }
    Ok(Some(MatrixF::from_codes(f, 3, n, data)))
}

fn det3(f: &FieldSpec, a: &[u32; 3], b: &[u32; 3], c: &[u32; 3]) -> u32 {
    let minor = |x: usize, y: usize| f.sub_code(f.mul_code(b[x], c[y]), f.mul_code(b[y], c[x]));
    let t0 = f.mul_code(a[0], minor(1, 2));
    let t1 = f.mul_code(a[1], minor(0, 2));
    let t2 = f.mul_code(a[2], minor(0, 1));
    f.add_code(f.sub_code(t0, t1), t2)
}

fn place(
    f: &FieldSpec,
    points: &[[u32; 3]],
    dep: &dyn Fn(usize, usize, usize) -> bool,
    pos: usize,
    n: usize,
    assigned: &mut Vec<[u32; 3]>,
    nodes: &mut u64,
) -> bool {
    if pos == n {
        return true;
    }
    for p in points {
        *nodes += 1;
        if *nodes > SEARCH_NODE_BUDGET {
            return false;
        }
        if assigned.contains(p) {
            continue;
        }
        let ok = (0..pos).all(|i| {
            (i + 1..pos).all(|j| (det3(f, &assigned[i], &assigned[j], p) == 0) == dep(i, j, pos))
        });
        if !ok {
            continue;
        }
        assigned.push(*p);
        if place(f, points, dep, pos + 1, n, assigned, nodes) {
            return true;
        }
        assigned.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf7() -> FieldSpec {
        FieldSpec::prime(7).unwrap()
    }

    #[test]
    fn k1_is_always_valid() {
        let m = MatrixF::from_ints(&gf7(), &[vec![1, 2, 3], vec![0, 0, 0]]);
        let rep = KLinearRep::new(m, 1, GroundSet::numbered(3)).unwrap();
        assert!(validate_klinear(&rep).is_valid());
    }

    #[test]
    fn shape_is_checked() {
        let m = MatrixF::zeros(&gf7(), 2, 3);
        assert!(matches!(
            KLinearRep::new(m, 2, GroundSet::numbered(2)),
            Err(MultilinearError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn block_diagonal_witness_is_global() {
        let f = gf7();
        let good = KLinearRep::new(
            MatrixF::from_ints(&f, &[vec![1, 0, 1, 0], vec![0, 1, 0, 1]]),
            2,
            GroundSet::new(["a", "b"]).unwrap(),
        )
        .unwrap();
        // {c, d} has rank 3 while each alone has rank 2
        let bad = KLinearRep::new(
            MatrixF::from_ints(
                &f,
                &[
                    vec![1, 0, 0, 0],
                    vec![0, 1, 1, 0],
                    vec![0, 0, 0, 1],
                    vec![0, 0, 0, 0],
                ],
            ),
            2,
            GroundSet::new(["c", "d"]).unwrap(),
        )
        .unwrap();
        let sum = direct_sum_rep(&[good.clone(), bad.clone(), good]).unwrap();
        assert_eq!(
            row_components(&sum),
            vec![vec![0, 1], vec![2, 3], vec![4, 5]]
        );
        let expect = Witness {
            subset: vec![2, 3],
            rank: 3,
        };
        assert_eq!(validate_klinear(&sum), Validity::Invalid(expect.clone()));
        assert_eq!(validate_component(&sum), Validity::Invalid(expect));
        assert!(!validate_klinear(&bad).is_valid());
    }

    #[test]
    fn odd_rank_block_is_the_witness() {
        // element 2's block has rank 1
        let m = MatrixF::from_ints(
            &gf7(),
            &[
                vec![1, 0, 1, 0, 0, 0],
                vec![0, 1, 0, 0, 0, 0],
                vec![0, 0, 0, 0, 1, 0],
            ],
        );
        let rep = KLinearRep::new(m, 2, GroundSet::numbered(3)).unwrap();
        assert_eq!(
            validate_klinear(&rep),
            Validity::Invalid(Witness {
                subset: vec![1],
                rank: 1
            })
        );
        assert!(matches!(
            matroid_from_klinear(rep),
            Err(MultilinearError::InvalidRepresentation { .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        let f = FieldSpec::gf49();
        let m = MatrixF::from_codes(&f, 2, 4, vec![0, 1, 7, 8, 48, 3, 0, 1]);
        let rep = KLinearRep::new(m, 2, GroundSet::new(["a", "b"]).unwrap()).unwrap();
        let text = rep.to_text();
        assert!(text.starts_with("klinear k=2 over GF(49; t^2+1) elements=a,b\nmatrix 2 4 over"));
        let back = KLinearRep::parse(&text).unwrap();
        assert_eq!(back, rep);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn truncated_file_is_a_parse_error() {
        let e = KLinearRep::parse("klinear k=1 over GF(7) elements=a,b\nmatrix 1 2 over GF(7)\n");
        assert!(e.is_err());
    }

    #[test]
    fn search_domain_and_arcs() {
        // U_{2,3} has rank 2, so it is outside the search's domain.
        let u = Matroid::uniform(2, GroundSet::numbered(3));
        assert!(matches!(
            search_rank3_rep(&u, &FieldSpec::prime(2).unwrap()),
            Err(MultilinearError::PreconditionViolated(_))
        ));
        // U_{3,5} needs a 5-arc: none in PG(2,3) (arcs have at most 4 points), some in PG(2,5).
        let u35 = Matroid::uniform(3, GroundSet::numbered(5));
        assert!(search_rank3_rep(&u35, &FieldSpec::prime(3).unwrap())
            .unwrap()
            .is_none());
        let rep = search_rank3_rep(&u35, &FieldSpec::prime(5).unwrap())
            .unwrap()
            .unwrap();
        let back =
            matroid_from_klinear(KLinearRep::new(rep, 1, GroundSet::numbered(5)).unwrap()).unwrap();
        assert!(back.same_as(&u35));
    }
}
