//! Matroid isomorphism by backtracking.
//!
//! At rank at most 3 a matroid is determined by its loops, its parallel classes
//! and the dependent triples of its simplification, so the search runs on class
//! representatives with class-size and triple-degree pruning. Higher ranks fall
//! back to element-wise backtracking over all subsets of size at most `r + 1`.

use std::collections::HashSet;

use super::{for_each_subset, Matroid};

/// Returns `bij` with `bij[i]` the element of `b` matched to element `i` of `a`.
pub fn is_isomorphic(a: &Matroid, b: &Matroid) -> Option<Vec<usize>> {
    if a.len() != b.len() || a.full_rank() != b.full_rank() {
        return None;
    }
    if a.full_rank() <= 3 {
        rank3(a, b)
    } else {
        general(a, b)
    }
}

struct Shape {
    loops: Vec<usize>,
    classes: Vec<Vec<usize>>,
    /// Dependent triples on class indices, sorted.
    triples: HashSet<[usize; 3]>,
    degree: Vec<usize>,
}

fn shape(m: &Matroid) -> Shape {
    let s = m.simplification_data();
    let reps: Vec<usize> = s.parallel_classes.iter().map(|c| c[0]).collect();
    let k = reps.len();
    let mut triples = HashSet::new();
    let mut degree = vec![0; k];
    for x in 0..k {
        for y in x + 1..k {
            for z in y + 1..k {
                if m.rank(&[reps[x], reps[y], reps[z]]) <= 2 {
                    triples.insert([x, y, z]);
                    degree[x] += 1;
                    degree[y] += 1;
                    degree[z] += 1;
                }
            }
        }
    }
    Shape {
        loops: s.loops,
        classes: s.parallel_classes,
        triples,
        degree,
    }
}

fn sorted3(a: usize, b: usize, c: usize) -> [usize; 3] {
    let mut t = [a, b, c];
    t.sort_unstable();
    t
}

fn rank3(a: &Matroid, b: &Matroid) -> Option<Vec<usize>> {
    let sa = shape(a);
    let sb = shape(b);
    if sa.loops.len() != sb.loops.len()
        || sa.classes.len() != sb.classes.len()
        || sa.triples.len() != sb.triples.len()
    {
        return None;
    }
    let key = |s: &Shape, i: usize| (s.classes[i].len(), s.degree[i]);
    let mut ka: Vec<_> = (0..sa.classes.len()).map(|i| key(&sa, i)).collect();
    let mut kb: Vec<_> = (0..sb.classes.len()).map(|i| key(&sb, i)).collect();
    ka.sort_unstable();
    kb.sort_unstable();
    if ka != kb {
        return None;
    }
    // Most constrained points first.
    let mut order: Vec<usize> = (0..sa.classes.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(sa.degree[i]));
    let k = order.len();
    let mut map = vec![usize::MAX; k];
    let mut used = vec![false; k];
    if !extend(&sa, &sb, &order, 0, &mut map, &mut used, &key) {
        return None;
    }
    let mut bij = vec![usize::MAX; a.len()];
    for (x, y) in sa.loops.iter().zip(&sb.loops) {
        bij[*x] = *y;
    }
    for (i, class) in sa.classes.iter().enumerate() {
        for (x, y) in class.iter().zip(&sb.classes[map[i]]) {
            bij[*x] = *y;
        }
    }
    Some(bij)
}

fn extend(
    sa: &Shape,
    sb: &Shape,
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
    key: &dyn Fn(&Shape, usize) -> (usize, usize),
) -> bool {
    if depth == order.len() {
        return true;
    }
    let x = order[depth];
    for y in 0..sb.classes.len() {
        if used[y] || key(sa, x) != key(sb, y) {
            continue;
        }
        let consistent = order[..depth].iter().enumerate().all(|(i, &u)| {
            order[i + 1..depth].iter().all(|&v| {
                sa.triples.contains(&sorted3(u, v, x))
                    == sb.triples.contains(&sorted3(map[u], map[v], y))
            })
        });
        if !consistent {
            continue;
        }
        map[x] = y;
        used[y] = true;
        if extend(sa, sb, order, depth + 1, map, used, key) {
            return true;
        }
        used[y] = false;
        map[x] = usize::MAX;
    }
    false
}

fn general(a: &Matroid, b: &Matroid) -> Option<Vec<usize>> {
    let n = a.len();
    let max = (a.full_rank() + 1).min(n);
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        a: &Matroid,
        b: &Matroid,
        max: usize,
        i: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == a.len() {
            return true;
        }
        for y in 0..b.len() {
            if used[y] || a.rank(&[i]) != b.rank(&[y]) {
                continue;
            }
            map[i] = y;
            let mut ok = true;
            // subsets of the already-mapped prefix, each extended by i
            for_each_subset(i, max - 1, &mut |s| {
                let mut sa: Vec<usize> = s.to_vec();
                sa.push(i);
                let sb: Vec<usize> = sa.iter().map(|&e| map[e]).collect();
                ok = a.rank(&sa) == b.rank(&sb);
                ok
            });
            if ok {
                used[y] = true;
                if go(a, b, max, i + 1, map, used) {
                    return true;
                }
                used[y] = false;
            }
        }
        map[i] = usize::MAX;
        false
    }
    go(a, b, max, 0, &mut map, &mut used).then_some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::GroundSet;

    #[test]
    fn identity_on_self() {
        let g = GroundSet::new(["a", "b", "c"]).unwrap();
        let m = Matroid::from_dependent_triples(g, 2, &[], &[], []).unwrap();
        let bij = is_isomorphic(&m, &m).unwrap();
        assert_eq!(bij.len(), 3);
    }

    #[test]
    fn different_ranks_are_not_isomorphic() {
        let g = GroundSet::new(["a", "b", "c"]).unwrap();
        let u23 = Matroid::from_dependent_triples(g.clone(), 2, &[], &[], []).unwrap();
        let u33 = Matroid::uniform(3, g);
        assert!(is_isomorphic(&u23, &u33).is_none());
    }

    #[test]
    fn general_fallback_matches_small_rank4() {
        let g = GroundSet::numbered(5);
        let u45 = Matroid::uniform(4, g.clone());
        let other = u45.permute(&[4, 2, 0, 1, 3]);
        assert!(is_isomorphic(&u45, &other).is_some());
        let u55 = Matroid::uniform(5, g);
        assert!(is_isomorphic(&u45, &u55).is_none());
    }
}
