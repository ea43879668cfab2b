//! Bounded verification of the rank axioms.
//!
//! Checked, for every `X` with `|X| < max` and `e, f` outside `X` such that
//! every queried set has at most `max` elements:
//!
//! * `r(∅) = 0` and `r(X) <= |X|`,
//! * `r(X) <= r(X+e) <= r(X) + 1`,
//! * `r(X+e) = r(X+f) = r(X)` implies `r(X+e+f) = r(X)`.
//!
//! Together these are equivalent to the matroid axioms when `max >= |E|`.

use std::collections::HashMap;
use std::fmt;

use super::{DependentSets, Matroid, Oracle, RankOracle};
use crate::multilinear::KLinearRep;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// `r(∅) != 0` or `r(X) > |X|`.
    Bound,
    Monotonicity,
    UnitIncrease,
    LocalSubmodularity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub kind: ViolationKind,
    pub set: Vec<usize>,
    pub e: Option<usize>,
    pub f: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub max_subset_size: usize,
    /// Number of base sets `X` examined.
    pub checked_sets: u64,
    pub violation: Option<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violation {
            None => write!(
                f,
                "pass ({} sets, queried sets up to size {})",
                self.checked_sets, self.max_subset_size
            ),
            Some(v) => write!(
                f,
                "{:?} violation at X={:?} e={:?} f={:?}",
                v.kind, v.set, v.e, v.f
            ),
        }
    }
}

/// Memo of ranks for subsets of a small ground set, indexed by size then colex rank.
struct Memo {
    max: usize,
    binom: Vec<Vec<u64>>,
    offsets: Vec<u64>,
    table: Option<Vec<u8>>,
    map: HashMap<u64, u8>,
}

const MEMO_TABLE_LIMIT: u64 = 1 << 26;

impl Memo {
    fn new(n: usize, max: usize) -> Self {
        let max = max.min(n);
        let mut binom = vec![vec![0u64; max + 2]; n + 1];
        for row in binom.iter_mut() {
            row[0] = 1;
        }
        for i in 1..=n {
            for j in 1..=max + 1 {
                binom[i][j] = binom[i - 1][j - 1].saturating_add(binom[i - 1][j]);
            }
        }
        let mut offsets = vec![0u64; max + 2];
        for s in 0..=max {
            offsets[s + 1] = offsets[s].saturating_add(binom[n][s]);
        }
        let total = offsets[max + 1];
        let table = (total <= MEMO_TABLE_LIMIT).then(|| vec![u8::MAX; total as usize]);
        Self {
            max,
            binom,
            offsets,
            table,
            map: HashMap::new(),
        }
    }

    fn index(&self, mask: u64) -> Option<u64> {
        let size = mask.count_ones() as usize;
        if size > self.max {
            return None;
        }
        let mut idx = self.offsets[size];
        let mut m = mask;
        let mut i = 1;
        while m != 0 {
            let pos = m.trailing_zeros() as usize;
            idx += self.binom[pos][i];
            m &= m - 1;
            i += 1;
        }
        Some(idx)
    }

    fn get_or(&mut self, mask: u64, compute: impl FnOnce() -> usize) -> usize {
        let Some(idx) = self.index(mask) else {
            return compute();
        };
        match &mut self.table {
            Some(t) => {
                let v = t[idx as usize];
                if v != u8::MAX {
                    return v as usize;
                }
                let r = compute();
                t[idx as usize] = r as u8;
                r
            }
            None => *self.map.entry(mask).or_insert_with(|| compute() as u8) as usize,
        }
    }
}

fn mask_elems(mask: u64, out: &mut Vec<usize>) {
    out.clear();
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
}

/// Rank evaluator on bitmasks, compiled from a matroid's oracle tree.
enum Fast<'a> {
    Matrix {
        rep: &'a KLinearRep,
        memo: Memo,
        buf: Vec<usize>,
    },
    Dependent(&'a DependentSets),
    Sum(Vec<(u32, u64, Fast<'a>)>),
    Minor {
        base: Box<Fast<'a>>,
        keep: Vec<usize>,
        contract_mask: u64,
        contract_rank: usize,
    },
    Custom(&'a dyn RankOracle, Vec<usize>),
}

impl<'a> Fast<'a> {
    fn compile(m: &'a Matroid, max: usize) -> Fast<'a> {
        match m.oracle() {
            Oracle::Matrix(rep) => Fast::Matrix {
                rep,
                memo: Memo::new(m.len(), max),
                buf: Vec::new(),
            },
            Oracle::Dependent(ds) => Fast::Dependent(ds),
            Oracle::Sum(s) => Fast::Sum(
                s.parts
                    .iter()
                    .zip(&s.offsets)
                    .map(|(p, &o)| {
                        let width = p.len() as u32;
                        let lane = if width >= 64 {
                            u64::MAX
                        } else {
                            (1u64 << width) - 1
                        };
                        (o as u32, lane, Fast::compile(p, max))
                    })
                    .collect(),
            ),
            Oracle::Minor(md) => Fast::Minor {
                base: Box::new(Fast::compile(&md.base, max + md.contract.len())),
                keep: md.keep.clone(),
                contract_mask: md.contract.iter().fold(0u64, |a, &e| a | 1 << e),
                contract_rank: md.contract_rank,
            },
            Oracle::Custom(o) => Fast::Custom(o.as_ref(), Vec::new()),
        }
    }

    fn rank(&mut self, mask: u64) -> usize {
        match self {
            Fast::Matrix { rep, memo, buf } => memo.get_or(mask, || {
                mask_elems(mask, buf);
                rep.rank_of_elements(buf)
            }),
            Fast::Dependent(ds) => {
                let mut v = Vec::with_capacity(mask.count_ones() as usize);
                mask_elems(mask, &mut v);
                ds.rank(&v)
            }
            Fast::Sum(parts) => parts
                .iter_mut()
                .map(|(shift, lane, f)| {
                    let sub = (mask >> *shift) & *lane;
                    if sub == 0 {
                        0
                    } else {
                        f.rank(sub)
                    }
                })
                .sum(),
            Fast::Minor {
                base,
                keep,
                contract_mask,
                contract_rank,
            } => {
                let mut bm = *contract_mask;
                let mut m = mask;
                while m != 0 {
                    bm |= 1 << keep[m.trailing_zeros() as usize];
                    m &= m - 1;
                }
                base.rank(bm) - *contract_rank
            }
            Fast::Custom(o, buf) => {
                mask_elems(mask, buf);
                o.rank(buf)
            }
        }
    }
}

/// Checks the rank axioms on all sets of at most `max_subset_size` elements.
/// Sets are visited by size, then lexicographically; the first violation is reported.
pub fn check_rank_axioms(m: &Matroid, max_subset_size: usize) -> AxiomReport {
    let n = m.len();
    let max = max_subset_size.min(n);
    if n <= 64 {
        let mut fast = Fast::compile(m, max);
        run_checks(n, max, &mut |mask, _| fast.rank(mask))
    } else {
        run_checks(n, max, &mut |_, elems| m.rank(elems))
    }
}

fn run_checks(n: usize, max: usize, rank: &mut dyn FnMut(u64, &[usize]) -> usize) -> AxiomReport {
    let mut report = AxiomReport {
        max_subset_size: max,
        checked_sets: 0,
        violation: None,
    };
    if rank(0, &[]) != 0 {
        report.violation = Some(AxiomViolation {
            kind: ViolationKind::Bound,
            set: Vec::new(),
            e: None,
            f: None,
        });
        return report;
    }
    if max == 0 {
        return report;
    }
    let wide = n > 64;
    let bit = |e: usize| if wide { 0 } else { 1u64 << e };
    let mut violation = None;
    let mut checked = 0u64;
    let mut closure = Vec::with_capacity(n);
    let mut buf = Vec::with_capacity(max + 2);
    super::for_each_subset(n, max - 1, &mut |x| {
        checked += 1;
        let xmask = x.iter().fold(0u64, |a, &e| a | bit(e));
        let rx = rank(xmask, x);
        let fail = |kind, e, f| {
            Some(AxiomViolation {
                kind,
                set: x.to_vec(),
                e,
                f,
            })
        };
        if rx > x.len() {
            violation = fail(ViolationKind::Bound, None, None);
            return false;
        }
        closure.clear();
        let mut in_x = x.iter().peekable();
        for e in 0..n {
            if in_x.peek() == Some(&&e) {
                in_x.next();
                continue;
            }
            buf.clear();
            buf.extend_from_slice(x);
            buf.push(e);
            let re = rank(xmask | bit(e), &buf);
            if re < rx {
                violation = fail(ViolationKind::Monotonicity, Some(e), None);
                return false;
            }
            if re > rx + 1 {
                violation = fail(ViolationKind::UnitIncrease, Some(e), None);
                return false;
            }
            if re == rx {
                closure.push(e);
            }
        }
        if x.len() + 2 <= max {
            for (i, &e) in closure.iter().enumerate() {
                for &f in &closure[i + 1..] {
                    buf.clear();
                    buf.extend_from_slice(x);
                    buf.push(e);
                    buf.push(f);
                    if rank(xmask | bit(e) | bit(f), &buf) != rx {
                        violation = fail(ViolationKind::LocalSubmodularity, Some(e), Some(f));
                        return false;
                    }
                }
            }
        }
        true
    });
    report.checked_sets = checked;
    report.violation = violation;
    report
}
