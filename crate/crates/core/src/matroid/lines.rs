//! Line families of rank-3 geometries and their saturation.
//!
//! Two points lie on at most one line, so lines sharing two points are the same
//! line. Saturation applies that rule to a fixpoint, after first identifying
//! points that are declared parallel.

use std::collections::BTreeSet;
use std::fmt;

use super::{GroundSet, Matroid};
use crate::text::{column_of, key_value, split_list, Lines, ParseError};

#[derive(Clone, PartialEq, Eq)]
pub struct LineFamily {
    pub points: GroundSet,
    /// Each line is a sorted set of point indices with at least two points.
    pub lines: Vec<BTreeSet<usize>>,
}

impl fmt::Debug for LineFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<Vec<&str>> = self
            .lines
            .iter()
            .map(|l| l.iter().map(|&i| self.points.name(i)).collect())
            .collect();
        f.debug_struct("LineFamily").field("lines", &lines).finish()
    }
}

/// Result of [`line_saturate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Saturation {
    /// Lines over class representatives (the least index of each class).
    pub family: LineFamily,
    /// Point classes after merging, each sorted, ordered by least element.
    pub partition: Vec<Vec<usize>>,
}

impl LineFamily {
    pub fn new(points: GroundSet, lines: impl IntoIterator<Item = BTreeSet<usize>>) -> Self {
        Self {
            points,
            lines: lines.into_iter().collect(),
        }
    }

    /// Lines given by label lists.
    pub fn from_labels<S: AsRef<str>>(
        points: GroundSet,
        lines: &[Vec<S>],
    ) -> Result<Self, super::MatroidError> {
        let lines = lines
            .iter()
            .map(|l| points.indices(l).map(|v| v.into_iter().collect()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { points, lines })
    }

    /// The nontrivial lines (rank-2 flats with at least three points) of the
    /// simplification of a rank-3 matroid, over class representatives.
    pub fn from_matroid(m: &Matroid) -> Self {
        let simple = m.simplification_data();
        let reps: Vec<usize> = simple.parallel_classes.iter().map(|c| c[0]).collect();
        let mut lines = Vec::new();
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate().skip(i + 1) {
                for &c in &reps[j + 1..] {
                    if m.rank(&[a, b, c]) <= 2 {
                        lines.push([a, b, c].into_iter().collect());
                    }
                }
            }
        }
        let fam = LineFamily::new(m.ground().clone(), lines);
        line_saturate(&fam, &[]).family
    }

    /// Whether some line contains all of `pts`.
    pub fn collinear(&self, pts: &[usize]) -> bool {
        self.lines.iter().any(|l| pts.iter().all(|p| l.contains(p)))
    }

    /// `lines elements=<list>` followed by one `line <a> <b> ...` per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("lines elements={}\n", self.points.names().join(","));
        for l in self.line_labels() {
            s.push_str(&format!("line {}\n", l.join(" ")));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = Lines::new(text);
        let (ln, header) = lines.next_line("`lines elements=<list>`")?;
        let rest = header
            .strip_prefix("lines ")
            .ok_or_else(|| ParseError::expected(ln, 1, "`lines elements=<list>`"))?;
        let elems = key_value(rest.trim(), "elements", ln, column_of(header, rest.trim()))?;
        let points = GroundSet::new(split_list(elems))
            .map_err(|e| ParseError::invalid(ln, column_of(header, elems), e.to_string()))?;
        let mut family = Vec::new();
        while let Some((ln, line)) = lines.peek_line() {
            lines.next_line("line")?;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.first() != Some(&"line") || toks.len() < 3 {
                return Err(ParseError::expected(
                    ln,
                    1,
                    "`line <a> <b> ...` with at least two points",
                ));
            }
            let mut l = BTreeSet::new();
            for tok in &toks[1..] {
                let i = points
                    .index_of(tok)
                    .map_err(|e| ParseError::invalid(ln, column_of(line, tok), e.to_string()))?;
                l.insert(i);
            }
            family.push(l);
        }
        lines.finish()?;
        Ok(Self::new(points, family))
    }

    pub fn line_labels(&self) -> Vec<Vec<String>> {
        self.lines
            .iter()
            .map(|l| l.iter().map(|&i| self.points.name(i).to_string()).collect())
            .collect()
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Identifies each pair in `merges`, then unions lines sharing two or more
/// points until no such pair remains.
pub fn line_saturate(family: &LineFamily, merges: &[(usize, usize)]) -> Saturation {
    let n = family.points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for &(a, b) in merges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            // keep the least index as representative
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            parent[hi] = lo;
        }
    }
    let rep: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    let mut lines: Vec<BTreeSet<usize>> = family
        .lines
        .iter()
        .map(|l| l.iter().map(|&p| rep[p]).collect::<BTreeSet<_>>())
        .filter(|l| l.len() >= 2)
        .collect();
    loop {
        let mut merged = false;
        'outer: for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                if lines[i].intersection(&lines[j]).nth(1).is_some() {
                    let other = lines.swap_remove(j);
                    lines[i].extend(other);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }
    lines.sort();
    lines.dedup();
    let mut partition: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for (x, &r) in rep.iter().enumerate().take(n) {
        if slot[r] == usize::MAX {
            slot[r] = partition.len();
            partition.push(Vec::new());
        }
        partition[slot[r]].push(x);
    }
    Saturation {
        family: LineFamily {
            points: family.points.clone(),
            lines,
        },
        partition,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn merging_unites_lines() {
        // points 1..6 as indices 0..5; lines {1,5,3} and {4,6,3}; merge 1~4
        let pts = GroundSet::numbered(6);
        let fam = LineFamily::new(pts, [set(&[0, 4, 2]), set(&[3, 5, 2])]);
        let sat = line_saturate(&fam, &[(0, 3)]);
        assert_eq!(sat.family.lines, vec![set(&[0, 2, 4, 5])]);
        assert_eq!(sat.partition[0], vec![0, 3]);
    }

    #[test]
    fn disjoint_lines_are_a_fixpoint() {
        let pts = GroundSet::numbered(6);
        let fam = LineFamily::new(pts, [set(&[0, 1, 2]), set(&[2, 3, 4])]);
        let sat = line_saturate(&fam, &[]);
        assert_eq!(sat.family.lines, fam.lines);
        assert_eq!(sat.partition.len(), 6);
    }

    #[test]
    fn text_round_trip() {
        let text = "lines elements=a,b,c,d\nline a b c\nline c d\n";
        let fam = LineFamily::parse(text).unwrap();
        assert_eq!(fam.to_text(), text);
        let e = LineFamily::parse("lines elements=a,b\nline a z\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 8));
    }

    #[test]
    fn saturation_is_idempotent() {
        let pts = GroundSet::numbered(7);
        let fam = LineFamily::new(
            pts,
            [
                set(&[0, 1, 2]),
                set(&[1, 2, 3]),
                set(&[4, 5, 6]),
                set(&[3, 6]),
            ],
        );
        let once = line_saturate(&fam, &[]);
        let twice = line_saturate(&once.family, &[]);
        assert_eq!(once.family, twice.family);
    }
}
