//! Line-oriented matroid exchange format for rank at most 3.
//!
//! ```text
//! matroid rank=3 elements=a,b,c,d
//! loops=d
//! parallel=a,b
//! dep a b c
//! ```
//!
//! `loops` and `parallel` are omitted when empty; `parallel` lists only
//! classes of size at least two. `dep` lines list every dependent triple
//! (including those through loops or parallel pairs) sorted by element order.

use super::{GroundSet, Matroid, MatroidError};
use crate::text::{column_of, key_value, split_list, Lines, ParseError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatroidFile {
    pub rank: usize,
    pub ground: GroundSet,
    pub loops: Vec<usize>,
    pub parallel: Vec<Vec<usize>>,
    pub dependent: Vec<[usize; 3]>,
}

impl MatroidFile {
    pub fn from_matroid(m: &Matroid) -> Self {
        let s = m.simplification_data();
        Self {
            rank: m.full_rank(),
            ground: m.ground().clone(),
            loops: s.loops.clone(),
            parallel: s.nontrivial_classes().cloned().collect(),
            dependent: m.dependent_triples(),
        }
    }

    pub fn to_text(&self) -> String {
        let names = self.ground.names();
        let mut s = format!("matroid rank={} elements={}\n", self.rank, names.join(","));
        if !self.loops.is_empty() {
            s.push_str(&format!(
                "loops={}\n",
                self.ground.labels_of(&self.loops).join(",")
            ));
        }
        if !self.parallel.is_empty() {
            let classes: Vec<String> = self
                .parallel
                .iter()
                .map(|c| self.ground.labels_of(c).join(","))
                .collect();
            s.push_str(&format!("parallel={}\n", classes.join(";")));
        }
        for t in &self.dependent {
            s.push_str(&format!(
                "dep {} {} {}\n",
                names[t[0]], names[t[1]], names[t[2]]
            ));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = Lines::new(text);
        let (ln, header) = lines.next_line("`matroid rank=<r> elements=<list>`")?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.first() != Some(&"matroid") || toks.len() != 3 {
            return Err(ParseError::expected(
                ln,
                1,
                "`matroid rank=<r> elements=<list>`",
            ));
        }
        let rank_s = key_value(toks[1], "rank", ln, column_of(header, toks[1]))?;
        let rank: usize = rank_s
            .parse()
            .map_err(|_| ParseError::expected(ln, column_of(header, rank_s), "rank"))?;
        let elems = key_value(toks[2], "elements", ln, column_of(header, toks[2]))?;
        let ground = GroundSet::new(split_list(elems))
            .map_err(|e| ParseError::invalid(ln, column_of(header, elems), e.to_string()))?;
        let lookup = |ln: usize, line: &str, labels: &[String], at: &str| {
            ground
                .indices(labels)
                .map_err(|e| ParseError::invalid(ln, column_of(line, at), e.to_string()))
        };

        let mut loops = Vec::new();
        let mut parallel = Vec::new();
        if let Some((ln, line)) = lines.peek_line() {
            if let Some(v) = line.strip_prefix("loops=") {
                lines.next_line("loops")?;
                loops = lookup(ln, line, &split_list(v), v)?;
            }
        }
        if let Some((ln, line)) = lines.peek_line() {
            if let Some(v) = line.strip_prefix("parallel=") {
                lines.next_line("parallel classes")?;
                for class in v.split(';') {
                    parallel.push(lookup(ln, line, &split_list(class), class)?);
                }
            }
        }
        let mut dependent = Vec::new();
        while let Some((ln, line)) = lines.peek_line() {
            lines.next_line("dep")?;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 4 || toks[0] != "dep" {
                return Err(ParseError::expected(ln, 1, "`dep <a> <b> <c>`"));
            }
            let mut t = [0usize; 3];
            for (slot, tok) in t.iter_mut().zip(&toks[1..]) {
                *slot = ground
                    .index_of(tok)
                    .map_err(|e| ParseError::invalid(ln, column_of(line, tok), e.to_string()))?;
            }
            if !(t[0] < t[1] && t[1] < t[2]) {
                return Err(ParseError::invalid(
                    ln,
                    1,
                    "triple elements must be distinct and in element order",
                ));
            }
            dependent.push(t);
        }
        lines.finish()?;
        Ok(Self {
            rank,
            ground,
            loops,
            parallel,
            dependent,
        })
    }

    /// Dependent-set backed matroid described by the file.
    pub fn to_matroid(&self) -> Result<Matroid, MatroidError> {
        if self.rank > 3 {
            return Err(MatroidError::Unsupported(format!(
                "the exchange format describes matroids of rank at most 3, got rank {}",
                self.rank
            )));
        }
        Matroid::from_dependent_triples(
            self.ground.clone(),
            self.rank,
            &self.loops,
            &self.parallel,
            self.dependent.iter().copied(),
        )
    }
}
