//! Matroids as rank oracles over labelled ground sets.
//!
//! Subsets are passed as slices of ground-set indices. Oracles accept any
//! order and ignore duplicates only where noted; callers normally pass sorted,
//! duplicate-free index lists.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::multilinear::KLinearRep;

mod axioms;
mod format;
mod iso;
mod lines;

pub use axioms::{check_rank_axioms, AxiomReport, AxiomViolation, ViolationKind};
pub use format::MatroidFile;
pub use iso::is_isomorphic;
pub use lines::{line_saturate, LineFamily, Saturation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("invalid element label `{0}`")]
    BadLabel(String),
    #[error("deleted and contracted sets overlap at `{0}`")]
    OverlappingSets(String),
    #[error("{0}")]
    Unsupported(String),
}

/// Ordered list of distinct element labels.
#[derive(Clone, PartialEq, Eq)]
pub struct GroundSet {
    names: Arc<Vec<String>>,
    index: Arc<HashMap<String, usize>>,
}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names.iter()).finish()
    }
}

fn label_ok(s: &str) -> bool {
    !s.is_empty()
        && !s
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, ',' | ';' | '='))
}

impl GroundSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, MatroidError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if !label_ok(n) {
                return Err(MatroidError::BadLabel(n.clone()));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(MatroidError::DuplicateLabel(n.clone()));
            }
        }
        Ok(Self {
            names: Arc::new(names),
            index: Arc::new(index),
        })
    }

    /// Labels `1..=n`.
    pub fn numbered(n: usize) -> Self {
        Self::new((1..=n).map(|i| i.to_string())).expect("numeric labels are valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, MatroidError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| MatroidError::UnknownElement(label.to_string()))
    }

    /// Sorted, de-duplicated indices of the given labels.
    pub fn indices<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>, MatroidError> {
        let set: BTreeSet<usize> = labels
            .iter()
            .map(|l| self.index_of(l.as_ref()))
            .collect::<Result<_, _>>()?;
        Ok(set.into_iter().collect())
    }

    pub fn labels_of(&self, idx: &[usize]) -> Vec<String> {
        idx.iter().map(|&i| self.names[i].clone()).collect()
    }
}

/// A user-supplied rank function on index subsets.
pub trait RankOracle: Send + Sync {
    fn rank(&self, set: &[usize]) -> usize;
}

impl<F> RankOracle for F
where
    F: Fn(&[usize]) -> usize + Send + Sync,
{
    fn rank(&self, set: &[usize]) -> usize {
        self(set)
    }
}

/// Rank-at-most-3 oracle described by loops, parallel classes and dependent triples.
#[derive(Debug, Clone)]
pub struct DependentSets {
    n: usize,
    rank_cap: usize,
    /// Class representative per element; loops map to `usize::MAX`.
    rep: Vec<usize>,
    triples: HashSet<[usize; 3]>,
}

impl DependentSets {
    fn rank(&self, set: &[usize]) -> usize {
        let mut reps: Vec<usize> = set
            .iter()
            .map(|&e| self.rep[e])
            .filter(|&r| r != usize::MAX)
            .collect();
        reps.sort_unstable();
        reps.dedup();
        let r = match reps.len() {
            n @ 0..=2 => n,
            _ => {
                let (a, b) = (reps[0], reps[1]);
                let collinear = reps[2..].iter().all(|&c| {
                    let mut t = [a, b, c];
                    t.sort_unstable();
                    self.triples.contains(&t)
                });
                if collinear {
                    2
                } else {
                    3
                }
            }
        };
        r.min(self.rank_cap)
    }
}

#[derive(Clone)]
pub(crate) struct SumParts {
    parts: Vec<Matroid>,
    offsets: Vec<usize>,
}

#[derive(Clone)]
pub(crate) struct MinorData {
    base: Matroid,
    /// New index -> base index.
    keep: Vec<usize>,
    contract: Vec<usize>,
    contract_rank: usize,
}

#[derive(Clone)]
pub(crate) enum Oracle {
    Matrix(Arc<KLinearRep>),
    Dependent(Arc<DependentSets>),
    Sum(Arc<SumParts>),
    Minor(Arc<MinorData>),
    Custom(Arc<dyn RankOracle>),
}

/// A matroid: ground set plus rank oracle. Immutable and cheap to clone.
#[derive(Clone)]
pub struct Matroid {
    ground: GroundSet,
    oracle: Oracle,
    full_rank: usize,
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.oracle {
            Oracle::Matrix(_) => "matrix",
            Oracle::Dependent(_) => "dependent-sets",
            Oracle::Sum(_) => "sum",
            Oracle::Minor(_) => "minor",
            Oracle::Custom(_) => "custom",
        };
        write!(
            f,
            "Matroid({kind}, {} elements, rank {})",
            self.ground.len(),
            self.full_rank
        )
    }
}

/// Loops and parallel classes of a matroid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplificationData {
    pub loops: Vec<usize>,
    /// Classes in order of their least element; members sorted.
    pub parallel_classes: Vec<Vec<usize>>,
}

impl SimplificationData {
    /// Classes with at least two members.
    pub fn nontrivial_classes(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.parallel_classes.iter().filter(|c| c.len() > 1)
    }
}

impl Matroid {
    fn with_oracle(ground: GroundSet, oracle: Oracle) -> Self {
        let mut m = Matroid {
            ground,
            oracle,
            full_rank: 0,
        };
        let all: Vec<usize> = (0..m.ground.len()).collect();
        m.full_rank = m.rank(&all);
        m
    }

    pub(crate) fn from_klinear(rep: Arc<KLinearRep>) -> Self {
        let ground = rep.labels().clone();
        Self::with_oracle(ground, Oracle::Matrix(rep))
    }

    /// Dependent-set backed matroid of rank at most 3.
    ///
    /// `triples` may mention loops or parallel elements; only triples of three
    /// distinct non-loop classes influence ranks.
    pub fn from_dependent_triples(
        ground: GroundSet,
        rank_cap: usize,
        loops: &[usize],
        parallel_classes: &[Vec<usize>],
        triples: impl IntoIterator<Item = [usize; 3]>,
    ) -> Result<Self, MatroidError> {
        if rank_cap > 3 {
            return Err(MatroidError::Unsupported(format!(
                "dependent-set oracles hold rank at most 3, got {rank_cap}"
            )));
        }
        let n = ground.len();
        let mut rep: Vec<usize> = (0..n).collect();
        for &l in loops {
            rep[l] = usize::MAX;
        }
        for class in parallel_classes {
            let r = *class.iter().min().expect("nonempty class");
            for &e in class {
                rep[e] = r;
            }
        }
        let triples = triples
            .into_iter()
            .filter_map(|t| {
                let mut r = [rep[t[0]], rep[t[1]], rep[t[2]]];
                r.sort_unstable();
                (r[2] != usize::MAX && r[0] != r[1] && r[1] != r[2]).then_some(r)
            })
            .collect();
        let ds = DependentSets {
            n,
            rank_cap,
            rep,
            triples,
        };
        Ok(Self::with_oracle(ground, Oracle::Dependent(Arc::new(ds))))
    }

    pub fn from_oracle(ground: GroundSet, oracle: impl RankOracle + 'static) -> Self {
        Self::with_oracle(ground, Oracle::Custom(Arc::new(oracle)))
    }

    /// `U_{r,n}` on the given labels.
    pub fn uniform(rank: usize, ground: GroundSet) -> Self {
        Self::from_oracle(ground, move |s: &[usize]| s.len().min(rank))
    }

    /// The matroid on no elements.
    pub fn empty() -> Self {
        Self::uniform(0, GroundSet::new(Vec::<String>::new()).unwrap())
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    /// `r(E)`, cached.
    pub fn full_rank(&self) -> usize {
        self.full_rank
    }

    pub(crate) fn oracle(&self) -> &Oracle {
        &self.oracle
    }

    /// Rank of a set of indices.
    pub fn rank(&self, set: &[usize]) -> usize {
        debug_assert!(set.iter().all(|&e| e < self.len()));
        match &self.oracle {
            Oracle::Matrix(rep) => rep.rank_of_elements(set),
            Oracle::Dependent(ds) => {
                debug_assert_eq!(ds.n, self.len());
                ds.rank(set)
            }
            Oracle::Sum(s) => {
                let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); s.parts.len()];
                for &e in set {
                    let p = s.offsets.partition_point(|&o| o <= e) - 1;
                    buckets[p].push(e - s.offsets[p]);
                }
                s.parts
                    .iter()
                    .zip(&buckets)
                    .map(|(m, b)| if b.is_empty() { 0 } else { m.rank(b) })
                    .sum()
            }
            Oracle::Minor(md) => {
                let mut base: Vec<usize> = set.iter().map(|&e| md.keep[e]).collect();
                base.extend_from_slice(&md.contract);
                md.base.rank(&base) - md.contract_rank
            }
            Oracle::Custom(o) => o.rank(set),
        }
    }

    pub fn rank_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<usize, MatroidError> {
        let idx = self.ground.indices(labels)?;
        Ok(self.rank(&idx))
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        self.rank(set) == set.len()
    }

    /// Deletes `delete` and contracts `contract` (both given by label).
    pub fn minor<S: AsRef<str>>(
        &self,
        delete: &[S],
        contract: &[S],
    ) -> Result<Matroid, MatroidError> {
        let d = self.ground.indices(delete)?;
        let c = self.ground.indices(contract)?;
        self.minor_idx(&d, &c)
    }

    pub fn minor_idx(&self, delete: &[usize], contract: &[usize]) -> Result<Matroid, MatroidError> {
        let dset: HashSet<usize> = delete.iter().copied().collect();
        if let Some(&x) = contract.iter().find(|e| dset.contains(e)) {
            return Err(MatroidError::OverlappingSets(
                self.ground.name(x).to_string(),
            ));
        }
        let cset: HashSet<usize> = contract.iter().copied().collect();
        let keep: Vec<usize> = (0..self.len())
            .filter(|e| !dset.contains(e) && !cset.contains(e))
            .collect();
        let names: Vec<String> = keep
            .iter()
            .map(|&e| self.ground.name(e).to_string())
            .collect();
        let ground = GroundSet::new(names)?;
        // Collapse nested minors so oracles stay one level deep.
        let (base, keep, mut contract_base) = match &self.oracle {
            Oracle::Minor(md) => (
                md.base.clone(),
                keep.iter().map(|&e| md.keep[e]).collect::<Vec<_>>(),
                md.contract.clone(),
            ),
            _ => (self.clone(), keep, Vec::new()),
        };
        let base_contract: Vec<usize> = match &self.oracle {
            Oracle::Minor(md) => contract.iter().map(|&e| md.keep[e]).collect(),
            _ => contract.to_vec(),
        };
        contract_base.extend(base_contract);
        contract_base.sort_unstable();
        let contract_rank = base.rank(&contract_base);
        Ok(Self::with_oracle(
            ground,
            Oracle::Minor(Arc::new(MinorData {
                base,
                keep,
                contract: contract_base,
                contract_rank,
            })),
        ))
    }

    /// Restriction to the given labels (order follows the ground set).
    pub fn restrict<S: AsRef<str>>(&self, keep: &[S]) -> Result<Matroid, MatroidError> {
        let k: HashSet<usize> = self.ground.indices(keep)?.into_iter().collect();
        let delete: Vec<usize> = (0..self.len()).filter(|e| !k.contains(e)).collect();
        self.minor_idx(&delete, &[])
    }

    pub fn delete<S: AsRef<str>>(&self, labels: &[S]) -> Result<Matroid, MatroidError> {
        self.minor(labels, &[])
    }

    pub fn contract<S: AsRef<str>>(&self, labels: &[S]) -> Result<Matroid, MatroidError> {
        let c = self.ground.indices(labels)?;
        self.minor_idx(&[], &c)
    }

    /// Loops and parallel classes via singleton and pair rank queries.
    pub fn simplification_data(&self) -> SimplificationData {
        let mut loops = Vec::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for e in 0..self.len() {
            if self.rank(&[e]) == 0 {
                loops.push(e);
                continue;
            }
            match classes.iter_mut().find(|c| self.rank(&[c[0], e]) == 1) {
                Some(c) => c.push(e),
                None => classes.push(vec![e]),
            }
        }
        SimplificationData {
            loops,
            parallel_classes: classes,
        }
    }

    pub fn is_simple(&self) -> bool {
        let s = self.simplification_data();
        s.loops.is_empty() && s.parallel_classes.iter().all(|c| c.len() == 1)
    }

    /// All 3-subsets of rank at most 2, in lexicographic order.
    pub fn dependent_triples(&self) -> Vec<[usize; 3]> {
        let n = self.len();
        (0..n)
            .into_par_iter()
            .flat_map_iter(|a| {
                let mut out = Vec::new();
                for b in a + 1..n {
                    for c in b + 1..n {
                        if self.rank(&[a, b, c]) <= 2 {
                            out.push([a, b, c]);
                        }
                    }
                }
                out
            })
            .collect()
    }

    /// Dependent triples as label triples.
    pub fn dependent_triple_labels(&self) -> Vec<[String; 3]> {
        self.dependent_triples()
            .into_iter()
            .map(|t| t.map(|e| self.ground.name(e).to_string()))
            .collect()
    }

    /// Equality as matroids on the same labelled ground set.
    ///
    /// For ranks at most 3 compares loops, parallel classes, dependent triples
    /// and `r(E)`; otherwise compares all subsets of size at most `r(E) + 1`.
    pub fn same_as(&self, other: &Matroid) -> bool {
        if self.ground.names() != other.ground.names() || self.full_rank != other.full_rank {
            return false;
        }
        if self.full_rank <= 3 {
            return self.simplification_data() == other.simplification_data()
                && self.dependent_triples() == other.dependent_triples();
        }
        let n = self.len();
        let max = (self.full_rank + 1).min(n);
        let mut found = true;
        for_each_subset(n, max, &mut |s| {
            if self.rank(s) != other.rank(s) {
                found = false;
                return false;
            }
            true
        });
        found
    }

    /// Same rank function on new labels (positional).
    pub fn relabel(&self, ground: GroundSet) -> Result<Matroid, MatroidError> {
        if ground.len() != self.len() {
            return Err(MatroidError::Unsupported(format!(
                "relabel needs {} labels, got {}",
                self.len(),
                ground.len()
            )));
        }
        let inner = self.clone();
        Ok(Matroid {
            ground,
            oracle: match &self.oracle {
                Oracle::Dependent(ds) => Oracle::Dependent(ds.clone()),
                _ => Oracle::Custom(Arc::new(move |s: &[usize]| inner.rank(s))),
            },
            full_rank: self.full_rank,
        })
    }

    /// Same matroid with elements permuted: new element `i` is old element `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Matroid {
        let names: Vec<String> = perm
            .iter()
            .map(|&i| self.ground.name(i).to_string())
            .collect();
        let ground = GroundSet::new(names).expect("permutation of valid labels");
        let inner = self.clone();
        let perm = perm.to_vec();
        Matroid::from_oracle(ground, move |s: &[usize]| {
            let m: Vec<usize> = s.iter().map(|&e| perm[e]).collect();
            inner.rank(&m)
        })
    }
}

/// Direct sum. Labels are kept when they are disjoint across parts; otherwise
/// every label is prefixed with `<part index>:`.
pub fn direct_sum(parts: &[Matroid]) -> Matroid {
    let mut seen = HashSet::new();
    let collide = parts
        .iter()
        .flat_map(|m| m.ground.names())
        .any(|l| !seen.insert(l.as_str()));
    let mut names = Vec::new();
    let mut offsets = Vec::new();
    for (i, m) in parts.iter().enumerate() {
        offsets.push(names.len());
        for l in m.ground.names() {
            names.push(if collide {
                format!("{i}:{l}")
            } else {
                l.clone()
            });
        }
    }
    let ground = GroundSet::new(names).expect("labels made distinct");
    let parts: Vec<Matroid> = parts.to_vec();
    let full_rank = parts.iter().map(Matroid::full_rank).sum();
    if parts.len() == 1 && !collide {
        return parts[0].clone();
    }
    Matroid {
        ground,
        oracle: Oracle::Sum(Arc::new(SumParts { parts, offsets })),
        full_rank,
    }
}

/// Visits every subset of `0..n` with at most `max` elements (sizes ascending,
/// lexicographic within a size) until the callback returns false.
pub(crate) fn for_each_subset(n: usize, max: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    let mut buf = Vec::with_capacity(max);
    for size in 0..=max.min(n) {
        if !subsets_of_size(n, size, 0, &mut buf, f) {
            return;
        }
    }
}

fn subsets_of_size(
    n: usize,
    size: usize,
    start: usize,
    buf: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if buf.len() == size {
        return f(buf);
    }
    let need = size - buf.len();
    for e in start..=n - need {
        buf.push(e);
        let go = subsets_of_size(n, size, e + 1, buf, f);
        buf.pop();
        if !go {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u23() -> Matroid {
        let g = GroundSet::new(["a", "b", "c"]).unwrap();
        Matroid::from_dependent_triples(g, 2, &[], &[], []).unwrap()
    }

    #[test]
    fn ground_set_rejects_bad_labels() {
        assert!(matches!(
            GroundSet::new(["a", "a"]),
            Err(MatroidError::DuplicateLabel(_))
        ));
        assert!(matches!(
            GroundSet::new(["a b"]),
            Err(MatroidError::BadLabel(_))
        ));
        assert!(matches!(
            GroundSet::new(["a,b"]),
            Err(MatroidError::BadLabel(_))
        ));
    }

    #[test]
    fn empty_set_has_rank_zero() {
        let m = u23();
        assert_eq!(m.rank(&[]), 0);
        assert_eq!(m.full_rank(), 2);
        assert!(matches!(
            m.rank_of(&["z"]),
            Err(MatroidError::UnknownElement(_))
        ));
    }

    #[test]
    fn uniform_restriction() {
        let m = u23().restrict(&["a", "b"]).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.full_rank(), 2);
        let u22 = Matroid::uniform(2, GroundSet::new(["a", "b"]).unwrap());
        assert!(m.same_as(&u22));
    }

    #[test]
    fn minor_rejects_overlap() {
        let m = u23();
        assert!(matches!(
            m.minor(&["a"], &["a"]),
            Err(MatroidError::OverlappingSets(_))
        ));
    }

    #[test]
    fn contraction_formula() {
        let m = u23();
        let c = m.contract(&["a"]).unwrap();
        assert_eq!(c.ground().names(), &["b", "c"]);
        assert_eq!(c.full_rank(), 1);
        assert_eq!(c.rank(&[0]), 1);
    }

    #[test]
    fn direct_sum_with_empty_is_identity() {
        let m = u23();
        let s = direct_sum(&[m.clone(), Matroid::empty()]);
        assert!(s.same_as(&m));
    }

    #[test]
    fn direct_sum_prefixes_on_collision() {
        let s = direct_sum(&[u23(), u23()]);
        assert_eq!(s.ground().name(0), "0:a");
        assert_eq!(s.ground().name(3), "1:a");
        assert_eq!(s.full_rank(), 4);
        assert_eq!(s.rank(&[0, 1, 2, 3]), 3);
    }

    #[test]
    fn parallel_and_loops() {
        let g = GroundSet::new(["a", "b", "c", "d"]).unwrap();
        let m = Matroid::from_dependent_triples(g, 3, &[3], &[vec![0, 2]], []).unwrap();
        let s = m.simplification_data();
        assert_eq!(s.loops, vec![3]);
        assert_eq!(s.parallel_classes, vec![vec![0, 2], vec![1]]);
        assert_eq!(m.full_rank(), 2);
    }

    #[test]
    fn subset_enumeration_order() {
        let mut seen = Vec::new();
        for_each_subset(3, 2, &mut |s| {
            seen.push(s.to_vec());
            true
        });
        assert_eq!(
            seen,
            vec![
                vec![],
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2]
            ]
        );
    }
}
