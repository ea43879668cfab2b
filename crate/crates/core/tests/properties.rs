//! Property suites. The proptest RNG is seeded from `ALGMAT_SEED` (default
//! [`DEFAULT_SEED`]) so every run explores the same cases.

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use algmat::derivation::{bounded_dependence, Polynomial};
use algmat::matroid::{check_rank_axioms, is_isomorphic};
use algmat::multilinear::{matroid_from_klinear, validate_klinear, Validity, Witness};
use algmat::verify::DEFAULT_SEED;
use algmat::{direct_sum, FieldSpec, GroundSet, KLinearRep, MatrixF, Matroid};

fn config(cases: u32) -> Config {
    let seed = std::env::var("ALGMAT_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED);
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

fn gf(q: u64) -> FieldSpec {
    FieldSpec::preset(q)
        .or_else(|| FieldSpec::prime(q).ok())
        .expect("known field")
}

/// `GF(81) = F_3[t]/(t^4 + t + 2)`.
fn gf81() -> FieldSpec {
    FieldSpec::new(3, &[2, 1, 0, 0, 1]).expect("irreducible")
}

fn matrix(f: &FieldSpec, rows: usize, cols: usize, codes: &[u32]) -> MatrixF {
    let q = f.order();
    MatrixF::from_codes(
        f,
        rows,
        cols,
        codes.iter().take(rows * cols).map(|c| c % q).collect(),
    )
}

fn codes(len: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..1000, len)
}

fn linear_matroid(f: &FieldSpec, rows: usize, cols: usize, codes: &[u32]) -> Matroid {
    let rep = KLinearRep::new(matrix(f, rows, cols, codes), 1, GroundSet::numbered(cols)).unwrap();
    matroid_from_klinear(rep).unwrap()
}

fn subset_of(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Bad subsets in shortlex order, first one wins.
fn brute_witness(rep: &KLinearRep) -> Option<Witness> {
    let n = rep.len();
    let mut subsets: Vec<Vec<usize>> = (1u32..1 << n).map(|m| subset_of(m, n)).collect();
    subsets.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    subsets.into_iter().find_map(|s| {
        let r = rep.column_rank(&s);
        (!r.is_multiple_of(rep.k())).then_some(Witness { subset: s, rank: r })
    })
}

fn poly(p: u32, nvars: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..4, nvars), -3i64..4), 0..5)
        .prop_map(move |terms| Polynomial::from_terms(p, nvars, terms))
}

/// `P(f_1, ..., f_s)` computed with polynomial arithmetic.
fn substitute(p: &Polynomial, fs: &[Polynomial]) -> Polynomial {
    let (ch, n) = (fs[0].characteristic(), fs[0].nvars());
    let mut acc = Polynomial::zero(ch, n);
    for (e, c) in p.terms() {
        let mut t = Polynomial::constant(ch, n, c as i64);
        for (f, &k) in fs.iter().zip(e) {
            t = t.mul(&f.pow(k as u64));
        }
        acc = acc.add(&t);
    }
    acc
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn field_axioms(q in prop::sample::select(vec![2u64, 7, 9, 25, 49]), a in 0u32..1000, b in 0u32..1000, c in 0u32..1000) {
        let f = gf(q);
        let (a, b, c) = (a % f.order(), b % f.order(), c % f.order());
        prop_assert_eq!(f.add_code(a, b), f.add_code(b, a));
        prop_assert_eq!(f.mul_code(a, b), f.mul_code(b, a));
        prop_assert_eq!(f.mul_code(a, f.mul_code(b, c)), f.mul_code(f.mul_code(a, b), c));
        prop_assert_eq!(f.add_code(a, f.add_code(b, c)), f.add_code(f.add_code(a, b), c));
        prop_assert_eq!(f.mul_code(a, f.add_code(b, c)), f.add_code(f.mul_code(a, b), f.mul_code(a, c)));
        prop_assert_eq!(f.add_code(a, f.neg_code(a)), 0);
        match f.inv_code(a) {
            Some(i) => prop_assert_eq!(f.mul_code(a, i), f.one().code()),
            None => prop_assert_eq!(a, 0),
        }
        prop_assert_eq!(f.pow_code(a, f.order() as u64), a);
    }

    #[test]
    fn rank_is_transpose_and_row_operation_invariant(
        q in prop::sample::select(vec![2u64, 5, 9]),
        rows in 1usize..5, cols in 1usize..6, data in codes(30),
        i in 0usize..5, j in 0usize..5, c in 0u32..1000,
    ) {
        let f = gf(q);
        let a = matrix(&f, rows, cols, &data);
        let r = a.rank();
        prop_assert!(r <= rows.min(cols));
        prop_assert_eq!(a.transpose().rank(), r);
        let (i, j) = (i % rows, j % rows);
        prop_assume!(i != j);
        let mut e = MatrixF::identity(&f, rows);
        e.set(j, i, &f.element(c % f.order())).unwrap();
        prop_assert_eq!(e.mul(&a).unwrap().rank(), r);
        let kernel = a.kernel();
        prop_assert_eq!(kernel.len(), cols - r);
        for v in kernel {
            prop_assert!(a.apply(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn linear_matroids_are_submodular(data in codes(24), masks in prop::collection::vec((0u32..256, 0u32..256), 20)) {
        let m = linear_matroid(&gf(5), 3, 8, &data);
        for (x, y) in masks {
            let (a, b) = (subset_of(x, 8), subset_of(y, 8));
            let union = subset_of(x | y, 8);
            let meet = subset_of(x & y, 8);
            prop_assert!(m.rank(&a) + m.rank(&b) >= m.rank(&union) + m.rank(&meet));
            prop_assert!(m.rank(&meet) <= m.rank(&a) && m.rank(&a) <= m.rank(&union));
        }
    }

    #[test]
    fn minors_compose(data in codes(21), d1 in 0usize..7, c1 in 0usize..7, d2 in 0usize..7, c2 in 0usize..7) {
        let m = linear_matroid(&gf(5), 3, 7, &data);
        let labels: Vec<String> = (1..=7).map(|i| i.to_string()).collect();
        prop_assume!([d1, c1, d2, c2].iter().collect::<std::collections::BTreeSet<_>>().len() == 4);
        let once = m.minor(&[&labels[d1], &labels[d2]], &[&labels[c1], &labels[c2]]).unwrap();
        let twice = m
            .minor(&[&labels[d1]], &[&labels[c1]])
            .unwrap()
            .minor(&[&labels[d2]], &[&labels[c2]])
            .unwrap();
        prop_assert!(once.same_as(&twice));
        prop_assert!(check_rank_axioms(&once, once.len()).passed());
        // deletion and contraction commute
        let swapped = m
            .minor(&[] as &[&String], &[&labels[c1]])
            .unwrap()
            .minor(&[&labels[d1]], &[] as &[&String])
            .unwrap();
        prop_assert!(swapped.same_as(&m.minor(&[&labels[d1]], &[&labels[c1]]).unwrap()));
    }

    #[test]
    fn isomorphism_survives_permutation(data in codes(21), perm in Just((0..7).collect::<Vec<usize>>()).prop_shuffle()) {
        let m = linear_matroid(&gf(3), 3, 7, &data);
        let p = m.permute(&perm);
        let bij = is_isomorphic(&m, &p);
        prop_assert!(bij.is_some());
        let bij = bij.unwrap();
        for mask in 0u32..128 {
            let s = subset_of(mask, 7);
            let image: Vec<usize> = s.iter().map(|&e| bij[e]).collect();
            prop_assert_eq!(m.rank(&s), p.rank(&image));
        }
    }

    #[test]
    fn direct_sum_rank_is_additive(a in codes(12), b in codes(15), mask in 0u32..512) {
        let m1 = linear_matroid(&gf(7), 2, 4, &a);
        let m2 = linear_matroid(&gf(7), 3, 5, &b).relabel(GroundSet::new(["a", "b", "c", "d", "e"]).unwrap()).unwrap();
        let s = direct_sum(&[m1.clone(), m2.clone()]);
        let x = subset_of(mask, 9);
        let left: Vec<usize> = x.iter().copied().filter(|&e| e < 4).collect();
        let right: Vec<usize> = x.iter().filter(|&&e| e >= 4).map(|e| e - 4).collect();
        prop_assert_eq!(s.rank(&x), m1.rank(&left) + m2.rank(&right));
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn witness_is_the_shortlex_first_bad_subset(data in codes(40)) {
        let f = gf(3);
        let rep = KLinearRep::new(matrix(&f, 4, 10, &data), 2, GroundSet::numbered(5)).unwrap();
        let expected = match brute_witness(&rep) {
            Some(w) => Validity::Invalid(w),
            None => Validity::Valid,
        };
        prop_assert_eq!(validate_klinear(&rep), expected);
    }

    #[test]
    fn validity_is_invariant_under_block_scaling(
        data in codes(40), left in codes(16), blocks in prop::collection::vec(codes(4), 5),
    ) {
        let f = gf(5);
        let a = matrix(&f, 4, 10, &data);
        let g = matrix(&f, 4, 4, &left);
        prop_assume!(g.rank() == 4);
        let scales: Vec<MatrixF> = blocks.iter().map(|b| matrix(&f, 2, 2, b)).collect();
        prop_assume!(scales.iter().all(|s| s.rank() == 2));
        let zero = MatrixF::zeros(&f, 2, 2);
        let grid: Vec<Vec<MatrixF>> = (0..5)
            .map(|i| (0..5).map(|j| if i == j { scales[i].clone() } else { zero.clone() }).collect())
            .collect();
        let d = MatrixF::block_assemble(&grid).unwrap();
        let b = g.mul(&a).unwrap().mul(&d).unwrap();
        let ra = KLinearRep::new(a, 2, GroundSet::numbered(5)).unwrap();
        let rb = KLinearRep::new(b, 2, GroundSet::numbered(5)).unwrap();
        prop_assert_eq!(validate_klinear(&ra), validate_klinear(&rb));
    }

    #[test]
    fn gradient_is_linear_and_leibniz(f in poly(5, 3), g in poly(5, 3), i in 0usize..3, c in 0u32..5) {
        let d = |p: &Polynomial| p.partial_derivative(i).unwrap();
        prop_assert_eq!(d(&f.add(&g)), d(&f).add(&d(&g)));
        prop_assert_eq!(d(&f.scale(c)), d(&f).scale(c));
        prop_assert_eq!(d(&f.mul(&g)), f.mul(&d(&g)).add(&g.mul(&d(&f))));
        prop_assert!(d(&Polynomial::constant(5, 3, 2)).is_zero());
    }

    #[test]
    fn evaluation_in_gf81_is_a_ring_map(f in poly(3, 3), g in poly(3, 3), pt in codes(3)) {
        let k = gf81();
        let pt: Vec<u32> = pt.iter().map(|c| c % k.order()).collect();
        let ev = |p: &Polynomial| {
            p.eval_with(&pt, |a, b| k.add_code(a, b), |a, b| k.mul_code(a, b), |c| k.int_code(c as i64))
        };
        prop_assert_eq!(ev(&f.add(&g)), k.add_code(ev(&f), ev(&g)));
        prop_assert_eq!(ev(&f.mul(&g)), k.mul_code(ev(&f), ev(&g)));
        prop_assert_eq!(ev(&f.frobenius(1)), k.pow_code(ev(&f), 3));
    }

    #[test]
    fn frobenius_preserves_annihilators(f in poly(3, 2), g in poly(3, 2), h in poly(3, 2)) {
        let fs = vec![f, g, h];
        prop_assume!(fs.iter().all(|p| !p.is_zero()));
        if let Some(ann) = bounded_dependence(&fs, 2).unwrap() {
            prop_assert!(substitute(&ann, &fs).is_zero());
            let shifted: Vec<Polynomial> = fs.iter().map(|p| p.frobenius(1)).collect();
            prop_assert!(substitute(&ann, &shifted).is_zero());
            prop_assert!(bounded_dependence(&shifted, 2).unwrap().is_some());
        }
    }
}
