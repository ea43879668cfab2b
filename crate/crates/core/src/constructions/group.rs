//! Finite groups given by Cayley tables.

use std::collections::HashMap;
use std::fmt;

use super::ConstructionError;
use crate::matroid::GroundSet;
use crate::text::{Lines, ParseError};

/// A finite group on named elements; element 0 is the identity.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupTable {
    names: Vec<String>,
    table: Vec<usize>,
    inverse: Vec<usize>,
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupTable({})", self.names.join(" "))
    }
}

impl GroupTable {
    /// Validates closure, identity, inverses and associativity exhaustively.
    /// `table[i][j]` is the index of `g_i * g_j`.
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, ConstructionError> {
        let bad = |s: String| Err(ConstructionError::InvalidGroup(s));
        let n = names.len();
        if n == 0 {
            return bad("a group has at least one element".into());
        }
        GroundSet::new(names.iter().cloned())
            .map_err(|e| ConstructionError::InvalidGroup(e.to_string()))?;
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return bad(format!("Cayley table must be {n} x {n}"));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return bad("Cayley table entry out of range".into());
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let mul = |a: usize, b: usize| flat[a * n + b];
        for a in 0..n {
            if mul(0, a) != a || mul(a, 0) != a {
                return bad(format!("`{}` is not an identity", names[0]));
            }
        }
        let mut inverse = vec![0; n];
        for a in 0..n {
            match (0..n).find(|&b| mul(a, b) == 0 && mul(b, a) == 0) {
                Some(b) => inverse[a] = b,
                None => return bad(format!("`{}` has no inverse", names[a])),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return bad(format!(
                            "not associative at ({}, {}, {})",
                            names[a], names[b], names[c]
                        ));
                    }
                }
            }
        }
        Ok(Self {
            names,
            table: flat,
            inverse,
        })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `C_m` on `e, g, g2, ..., g<m-1>`, with `g<a> * g<b> = g<a+b mod m>`.
    pub fn cyclic(m: usize) -> Self {
        assert!(m >= 1, "cyclic group of order 0");
        let names = (0..m)
            .map(|a| match a {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g{a}"),
            })
            .collect();
        let table = (0..m)
            .map(|a| (0..m).map(|b| (a + b) % m).collect())
            .collect();
        Self::new(names, table).expect("cyclic table is a group")
    }

    /// `Q_8` in the order `e, -e, i, -i, j, -j, k, -k`.
    pub fn quaternion() -> Self {
        // unit index u in {1, i, j, k}, sign s; element index 2u + s
        // unit product: (sign, unit) of u*v
        const UNIT: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let names = ["e", "-e", "i", "-i", "j", "-j", "k", "-k"]
            .map(String::from)
            .to_vec();
        let table = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (s, u) = UNIT[a / 2][b / 2];
                        2 * u + (s + a % 2 + b % 2) % 2
                    })
                    .collect()
            })
            .collect();
        Self::new(names, table).expect("quaternion table is a group")
    }

    /// `trivial`, `c<m>` / `cyclic(<m>)`, or `q8` / `quaternion`.
    pub fn builtin(name: &str) -> Option<Self> {
        let name = name.trim();
        match name {
            "trivial" => return Some(Self::trivial()),
            "q8" | "quaternion" => return Some(Self::quaternion()),
            _ => {}
        }
        let m = name
            .strip_prefix("cyclic(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| name.strip_prefix('c'))?;
        m.parse().ok().filter(|&m| m >= 1).map(Self::cyclic)
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

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.len() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// Element names on one line, then the Cayley table row by row.
    pub fn to_text(&self) -> String {
        let mut s = self.names.join(" ");
        s.push('\n');
        for a in 0..self.len() {
            let row: Vec<&str> = (0..self.len()).map(|b| self.name(self.mul(a, b))).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = Lines::new(text);
        let g = Self::parse_lines(&mut lines)?;
        lines.finish()?;
        Ok(g)
    }

    pub(crate) fn parse_lines(lines: &mut Lines<'_>) -> Result<Self, ParseError> {
        let (ln0, header) = lines.next_line("group element names")?;
        let names: Vec<String> = header.split_whitespace().map(String::from).collect();
        let index: HashMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut table = Vec::with_capacity(names.len());
        for a in 0..names.len() {
            let (ln, line) = lines.next_line(&format!("Cayley table row for `{}`", names[a]))?;
            let row = line
                .split_whitespace()
                .map(|t| {
                    index.get(t).copied().ok_or_else(|| {
                        ParseError::invalid(
                            ln,
                            crate::text::column_of(line, t),
                            format!("unknown group element `{t}`"),
                        )
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != names.len() {
                return Err(ParseError::expected(
                    ln,
                    1,
                    format!("{} entries", names.len()),
                ));
            }
            table.push(row);
        }
        Self::new(names, table).map_err(|e| ParseError::invalid(ln0, 1, e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quaternion_relations() {
        let q = GroupTable::quaternion();
        let ix = |s: &str| q.index_of(s).unwrap();
        assert_eq!(q.mul(ix("i"), ix("j")), ix("k"));
        assert_eq!(q.mul(ix("j"), ix("i")), ix("-k"));
        assert_eq!(q.mul(ix("k"), ix("k")), ix("-e"));
        assert_eq!(q.inv(ix("i")), ix("-i"));
        assert_eq!(q.inv(ix("-e")), ix("-e"));
    }

    #[test]
    fn small_builtins() {
        let c2 = GroupTable::builtin("c2").unwrap();
        assert_eq!(c2.names(), &["e", "g"]);
        assert_eq!(c2.mul(1, 1), 0);
        assert_eq!(GroupTable::builtin("trivial").unwrap().len(), 1);
        assert_eq!(GroupTable::builtin("cyclic(3)").unwrap().name(2), "g2");
        assert!(GroupTable::builtin("c0").is_none());
    }

    #[test]
    fn non_groups_are_rejected() {
        let names = vec!["e".to_string(), "a".to_string()];
        // a*a = a has no inverse for a
        assert!(GroupTable::new(names, vec![vec![0, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let q = GroupTable::quaternion();
        let text = q.to_text();
        assert_eq!(GroupTable::parse(&text).unwrap(), q);
    }
}
